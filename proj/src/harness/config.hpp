#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "face/trajectory.hpp"
#include "gateway/gateway.hpp"
#include "ngram/ngram.hpp"

namespace captem::harness {

/// Harness settings, read from `key = value` text. `#` starts a comment.
///
/// Keys: base_url, model, api_key_env, timeout, max_retries, backoff_base,
/// max_in_flight, cache_dir, temperature, template_dir, workers, rouge_beta,
/// cider_scale, lambda, cost_gate, max_age.
struct HarnessConfig {
  gateway::GatewayConfig gateway;
  std::filesystem::path template_dir;  // empty: built-in prompts
  std::size_t workers = 4;
  double rouge_beta = ngram::kDefaultRougeBeta;
  double cider_scale = ngram::kDefaultCiderScale;
  face::AssociationParams association;

  /// Throws Error(kConfig) naming the line on syntax errors, unknown keys
  /// or bad values.
  static HarnessConfig parse(std::string_view text, const std::string& origin = "<config>");
  static HarnessConfig load(const std::filesystem::path& path);

  /// Sets one key from its text form; same validation as parse().
  void set(std::string_view key, std::string_view value);

  void validate() const;

  /// Sorted `key=value` lines for the settings that can change scores
  /// (transport limits, paths and worker counts are left out).
  std::string canonical() const;
};

}  // namespace captem::harness

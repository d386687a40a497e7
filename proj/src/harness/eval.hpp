#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "harness/config.hpp"
#include "harness/corpus.hpp"
#include "harness/report.hpp"
#include "semantic/backend.hpp"

namespace captem::harness {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct MetricSet {
  bool tem = false;
  bool autodq = false;
  bool cider = false;
  bool rouge_l = false;
  bool judge = false;

  /// Comma-separated subset of tem, autodq, cider, rougel, judge.
  /// Throws Error(kConfig) on unknown or empty lists.
  static MetricSet parse(std::string_view list);
  static MetricSet all_but_judge() { return {true, true, true, true, false}; }

  std::vector<std::string> names() const;
  bool needs_events() const noexcept { return tem || autodq; }
  bool needs_backend() const noexcept { return tem || autodq || judge; }
};

struct EvalOptions {
  MetricSet metrics = MetricSet::all_but_judge();
  /// Rewrite predictions into the reference style before the backend sees
  /// them. CIDEr and ROUGE-L always use the raw prediction.
  bool align = false;
  /// Empty: SOURCE_DATE_EPOCH if set, otherwise the current UTC time.
  std::string timestamp;
};

/// "mock" or "gateway". Throws Error(kConfig) for anything else.
std::unique_ptr<semantic::SemanticBackend> make_backend(std::string_view kind,
                                                        const HarnessConfig& config);

/// ISO-8601 UTC; honours SOURCE_DATE_EPOCH.
std::string default_timestamp();

std::string config_hash(const HarnessConfig& config, const semantic::SemanticBackend& backend,
                        const EvalOptions& options);

/// Scores every pair on a bounded worker pool; results keep input order.
/// Backend failures are recorded on the pair and never stop the run; after the
/// first kBackendUnavailable the backend is not called again and the remaining
/// backend-dependent metrics are recorded as skipped. CIDEr idf comes from
/// `reference_corpus` (the whole reference file).
MetricReport run_eval(const std::vector<CaptionPair>& pairs,
                      const std::vector<std::string>& reference_corpus,
                      const semantic::SemanticBackend& backend, const HarnessConfig& config,
                      const EvalOptions& options);

/// Reads both JSONL files and runs run_eval. Input errors throw
/// (InputParseError, kMissingReference).
MetricReport run_eval_files(const std::filesystem::path& predictions,
                            const std::filesystem::path& references,
                            const semantic::SemanticBackend& backend,
                            const HarnessConfig& config, const EvalOptions& options);

}  // namespace captem::harness

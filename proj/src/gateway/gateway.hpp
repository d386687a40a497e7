#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <semaphore>
#include <string>

#include "gateway/response_cache.hpp"

namespace captem::gateway {

/// Split form of base_url: "http://host:port" and "/prefix/chat/completions".
struct Endpoint {
  std::string scheme_host_port;
  std::string path;
};

/// Returns nullopt for anything that is not http(s)://host[:port][/path].
std::optional<Endpoint> parse_endpoint(const std::string& base_url);

struct GatewayConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model_name = "gpt-3.5-turbo";
  /// Name of the environment variable holding the API key. The key itself is
  /// never stored in the config, the cache, or any message.
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_s = 60.0;
  int max_retries = 3;
  double backoff_base_s = 1.0;
  int max_in_flight = 4;
  std::filesystem::path cache_dir = ".captem-cache";
  double temperature = 0.0;

  /// Throws Error(kConfig) on timeout <= 0, max_in_flight < 1, max_retries < 0,
  /// backoff_base < 0 or an unparseable base_url.
  void validate() const;
};

/// Prompt plus the template identity that goes into the cache key.
struct ChatRequest {
  std::string template_name;
  int template_version = 0;
  std::string prompt;
};

struct GatewayStats {
  std::size_t network_requests = 0;
  std::size_t cache_hits = 0;
  std::size_t retries = 0;
};

/// OpenAI-compatible chat-completions client with retry, a global in-flight
/// bound and a content-addressed response cache. Thread-safe.
class Gateway {
 public:
  explicit Gateway(GatewayConfig config);

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Cache hit: no network traffic. Miss: POST {base_url}/chat/completions,
  /// return choices[0].message.content and persist it.
  /// Errors: kAuth (401/403), kRateLimited (429), kServer (5xx), kTimeout,
  /// kBackendUnavailable (connection failure), kClientRequest (other 4xx),
  /// kMalformedReply. Only 429, 5xx and timeouts are retried.
  std::string complete(const ChatRequest& request);

  const GatewayConfig& config() const noexcept { return config_; }
  GatewayStats stats() const noexcept;

 private:
  std::string post_with_retries(const std::string& body, int& status_out);

  GatewayConfig config_;
  Endpoint endpoint_;
  ResponseCache cache_;
  std::counting_semaphore<1 << 20> slots_;
  std::atomic<std::size_t> network_requests_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::size_t> retries_{0};
};

}  // namespace captem::gateway

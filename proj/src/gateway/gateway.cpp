#include "gateway/gateway.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "core/error.hpp"

namespace captem::gateway {

using nlohmann::json;

namespace {

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

double jitter_factor() {
  thread_local std::mt19937 rng{std::random_device{}()};
  return std::uniform_real_distribution<double>(0.5, 1.0)(rng);
}

// Retryable failures carry their final error code.
struct Attempt {
  bool ok = false;
  bool retryable = false;
  ErrorCode code = ErrorCode::kOk;
  int status = 0;
  std::string body;
  std::string message;
};

}  // namespace

std::optional<Endpoint> parse_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return std::nullopt;
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") return std::nullopt;
  const auto host_begin = scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  Endpoint ep;
  ep.scheme_host_port = url.substr(0, path_begin);
  if (ep.scheme_host_port.size() <= host_begin) return std::nullopt;
  ep.path = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!ep.path.empty() && ep.path.back() == '/') ep.path.pop_back();
  ep.path += "/chat/completions";
  return ep;
}

void GatewayConfig::validate() const {
  if (!(timeout_s > 0.0)) throw Error(ErrorCode::kConfig, "gateway timeout must be > 0");
  if (max_in_flight < 1) throw Error(ErrorCode::kConfig, "max_in_flight must be >= 1");
  if (max_retries < 0) throw Error(ErrorCode::kConfig, "max_retries must be >= 0");
  if (backoff_base_s < 0.0) throw Error(ErrorCode::kConfig, "backoff_base must be >= 0");
  if (!parse_endpoint(base_url)) throw Error(ErrorCode::kConfig, "base_url must be http(s)://host[:port][/path]");
}

Gateway::Gateway(GatewayConfig config)
    : config_((config.validate(), std::move(config))),
      endpoint_(*parse_endpoint(config_.base_url)),
      cache_(config_.cache_dir),
      slots_(config_.max_in_flight) {}

GatewayStats Gateway::stats() const noexcept {
  return {network_requests_.load(), cache_hits_.load(), retries_.load()};
}

std::string Gateway::complete(const ChatRequest& request) {
  const std::string key = cache_key(
      {config_.model_name, request.template_name, request.template_version, request.prompt});
  if (auto hit = cache_.lookup(key)) {
    ++cache_hits_;
    return hit->reply;
  }

  const json body = {
      {"model", config_.model_name},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", config_.temperature},
  };
  int status = 0;
  const std::string reply_text = post_with_retries(body.dump(), status);

  const json reply = json::parse(reply_text, nullptr, /*allow_exceptions=*/false);
  std::string content;
  try {
    const auto& msg = reply.at("choices").at(0).at("message").at("content");
    if (!msg.is_string()) throw Error(ErrorCode::kMalformedReply, "content is not a string");
    content = msg.get<std::string>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kMalformedReply, "reply lacks choices[0].message.content");
  }

  CacheRecord record;
  record.key = key;
  record.model_name = config_.model_name;
  record.template_name = request.template_name;
  record.template_version = request.template_version;
  record.prompt = request.prompt;
  record.reply = content;
  record.created_at = unix_now();
  record.protocol_status = status;
  cache_.store(record);
  return content;
}

std::string Gateway::post_with_retries(const std::string& body, int& status_out) {
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  const auto secs = static_cast<time_t>(config_.timeout_s);
  const auto usecs = static_cast<time_t>((config_.timeout_s - static_cast<double>(secs)) * 1e6);

  for (int attempt = 0;; ++attempt) {
    Attempt a;
    {
      slots_.acquire();
      struct Release {
        std::counting_semaphore<1 << 20>& s;
        ~Release() { s.release(); }
      } release{slots_};

      httplib::Client client(endpoint_.scheme_host_port);
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      client.set_write_timeout(secs, usecs);
      ++network_requests_;
      auto res = client.Post(endpoint_.path, headers, body, "application/json");
      if (!res) {
        const auto err = res.error();
        a.message = httplib::to_string(err);
        if (err == httplib::Error::Read || err == httplib::Error::Write ||
            err == httplib::Error::ConnectionTimeout) {
          a.code = ErrorCode::kTimeout;
          a.retryable = true;
        } else {
          a.code = ErrorCode::kBackendUnavailable;
        }
      } else {
        a.status = res->status;
        a.body = res->body;
        if (res->status >= 200 && res->status < 300) {
          a.ok = true;
        } else if (res->status == 401 || res->status == 403) {
          a.code = ErrorCode::kAuth;
        } else if (res->status == 429) {
          a.code = ErrorCode::kRateLimited;
          a.retryable = true;
        } else if (res->status >= 500) {
          a.code = ErrorCode::kServer;
          a.retryable = true;
        } else {
          a.code = ErrorCode::kClientRequest;
        }
        a.message = fmt::format("HTTP {}", res->status);
      }
    }

    if (a.ok) {
      status_out = a.status;
      return a.body;
    }
    if (!a.retryable || attempt >= config_.max_retries) {
      throw Error(a.code, fmt::format("{} {}: {} after {} attempt(s)", config_.model_name,
                                      endpoint_.path, a.message, attempt + 1));
    }
    ++retries_;
    const double delay = config_.backoff_base_s * std::ldexp(1.0, attempt) * jitter_factor();
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
  }
}

}  // namespace captem::gateway

// Local OpenAI-compatible chat-completions stub for gateway tests.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

namespace stub {

struct Reply {
  int status = 200;
  std::string content;       // wrapped in a chat-completion body when status is 2xx
  std::string raw_body;      // sent verbatim when non-empty
  std::chrono::milliseconds delay{0};
};

struct SeenRequest {
  std::string authorization;
  nlohmann::json body;
};

class ChatServer {
 public:
  using Handler = std::function<Reply(std::size_t call_index, const std::string& prompt)>;

  explicit ChatServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const std::size_t index = calls_.fetch_add(1);
      const int now = ++in_flight_;
      int prev = max_in_flight_.load();
      while (now > prev && !max_in_flight_.compare_exchange_weak(prev, now)) {
      }

      nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
      std::string prompt;
      if (body.is_object()) {
        prompt = body["messages"][0].value("content", "");
      }
      {
        std::lock_guard lock(mu_);
        seen_.push_back({req.get_header_value("Authorization"), body});
      }
      const Reply r = handler_(index, prompt);
      if (r.delay.count() > 0) std::this_thread::sleep_for(r.delay);

      res.status = r.status;
      if (!r.raw_body.empty()) {
        res.set_content(r.raw_body, "application/json");
      } else if (r.status >= 200 && r.status < 300) {
        const nlohmann::json out = {
            {"id", "stub"},
            {"object", "chat.completion"},
            {"choices", {{{"index", 0},
                          {"message", {{"role", "assistant"}, {"content", r.content}}},
                          {"finish_reason", "stop"}}}}};
        res.set_content(out.dump(), "application/json");
      } else {
        res.set_content(R"({"error":{"message":"stub error"}})", "application/json");
      }
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("stub server could not bind");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ChatServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  ChatServer(const ChatServer&) = delete;
  ChatServer& operator=(const ChatServer&) = delete;

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  std::size_t calls() const { return calls_.load(); }
  int max_in_flight() const { return max_in_flight_.load(); }
  std::vector<SeenRequest> seen() const {
    std::lock_guard lock(mu_);
    return seen_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> calls_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  mutable std::mutex mu_;
  std::vector<SeenRequest> seen_;
};

inline Reply ok(std::string content) { return {200, std::move(content), {}, {}}; }
inline Reply status(int code) { return {code, {}, {}, {}}; }

}  // namespace stub

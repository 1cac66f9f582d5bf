/*
 * Copyright (C) 2026 The EmbodiKit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EKIT_TESTS_SUPPORT_MOCK_SERVER_HPP
#define EKIT_TESTS_SUPPORT_MOCK_SERVER_HPP

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace ekit::testsupport {

/// Chat-completion mock: the handler maps the user text of the request to
/// the assistant content. Tracks concurrency so tests can assert the
/// in-flight bound, and can fail the first N requests with a 500.
class MockEndpoint {
 public:
  using Handler = std::function<std::string(const std::string& user_text)>;

  explicit MockEndpoint(Handler handler, int fail_first = 0, int delay_ms = 0)
      : handler_(std::move(handler)), fail_first_(fail_first), delay_ms_(delay_ms) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      const int now = ++concurrent_;
      int snapshot = max_concurrent_.load();
      while (now > snapshot && !max_concurrent_.compare_exchange_weak(snapshot, now)) {
      }
      if (delay_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
      const int hit = ++hits_;
      if (hit <= fail_first_) {
        res.status = 500;
        res.set_content("injected failure", "text/plain");
        --concurrent_;
        return;
      }
      std::string user_text;
      auto body = nlohmann::ordered_json::parse(req.body, nullptr, false);
      if (!body.is_discarded() && body.contains("messages")) {
        for (const auto& message : body["messages"]) {
          if (message.value("role", "") != "user") continue;
          for (const auto& part : message["content"]) {
            if (part.value("type", "") == "text") user_text = part["text"].get<std::string>();
          }
        }
      }
      nlohmann::ordered_json reply;
      reply["choices"] = {{{"message", {{"role", "assistant"}, {"content", handler_(user_text)}}}}};
      res.set_content(reply.dump(), "application/json");
      --concurrent_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    while (!server_.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }

  ~MockEndpoint() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int hits() const { return hits_.load(); }
  int max_concurrent() const { return max_concurrent_.load(); }

 private:
  httplib::Server server_;
  std::thread thread_;
  Handler handler_;
  int fail_first_ = 0;
  int delay_ms_ = 0;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::atomic<int> concurrent_{0};
  std::atomic<int> max_concurrent_{0};
};

}  // namespace ekit::testsupport

#endif  // EKIT_TESTS_SUPPORT_MOCK_SERVER_HPP

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

#include "ekit/client/http.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace ekit::client {

void EndpointConfig::validate() const {
  if (base_url.empty()) fail("endpoint: base_url required");
  if (!(timeout_seconds > 0.0)) fail("endpoint: timeout must be positive");
  if (max_retries < 0) fail("endpoint: retries must be >= 0");
  if (max_in_flight < 1) fail("endpoint: max_in_flight must be >= 1");
}

nlohmann::ordered_json build_request_body(const EndpointConfig& endpoint,
                                          const PromptSpec& prompt) {
  nlohmann::ordered_json body;
  if (!endpoint.model.empty()) body["model"] = endpoint.model;
  auto messages = nlohmann::ordered_json::array();
  messages.push_back({{"role", "system"}, {"content", prompt.system_text}});
  auto content = nlohmann::ordered_json::array();
  content.push_back({{"type", "text"}, {"text", prompt.user_text}});
  for (const auto& image : prompt.images) {
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", image}}}});
  }
  messages.push_back({{"role", "user"}, {"content", std::move(content)}});
  body["messages"] = std::move(messages);
  return body;
}

std::string query(const EndpointConfig& endpoint, const PromptSpec& prompt) {
  endpoint.validate();
  httplib::Client client(endpoint.base_url);
  const auto seconds = static_cast<time_t>(endpoint.timeout_seconds);
  const auto micros =
      static_cast<time_t>((endpoint.timeout_seconds - static_cast<double>(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  httplib::Headers headers;
  if (!endpoint.auth_token_env.empty()) {
    const char* token = std::getenv(endpoint.auth_token_env.c_str());
    if (token && *token) headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  const auto body = build_request_body(endpoint, prompt).dump();
  std::string last_error;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50 * (1 << (attempt - 1))));
    }
    auto response = client.Post(endpoint.path, headers, body, "application/json");
    if (!response) {
      last_error = "transport error: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status >= 500) {
      last_error = "server error " + std::to_string(response->status) + ": " +
                   response->body.substr(0, 200);
      continue;
    }
    if (response->status < 200 || response->status >= 300) {
      fail("endpoint returned " + std::to_string(response->status) + ": " +
           response->body.substr(0, 200));
    }
    auto j = nlohmann::ordered_json::parse(response->body, nullptr, false);
    if (j.is_discarded()) fail("endpoint returned non-JSON body");
    try {
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("unexpected response shape: ") + e.what());
    }
  }
  fail("endpoint unreachable after " + std::to_string(endpoint.max_retries + 1) +
       " attempts: " + last_error);
}

}  // namespace ekit::client

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

#ifndef EKIT_CLIENT_HTTP_HPP
#define EKIT_CLIENT_HTTP_HPP

#include <string>

#include "ekit/client/prompt.hpp"

namespace ekit::client {

struct EndpointConfig {
  std::string base_url;            // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/chat/completions";
  std::string model;               // optional model name to send
  std::string auth_token_env;      // name of the env var holding the bearer token
  double timeout_seconds = 30.0;
  int max_retries = 2;             // on transport errors and 5xx
  int max_in_flight = 4;

  void validate() const;
};

/// Sends one chat-completion-style request (system + user message, image
/// refs as image_url parts) and returns the assistant text verbatim.
/// Retries transient failures with exponential backoff; throws on timeout
/// after retries or a non-2xx final status (body excerpt included).
std::string query(const EndpointConfig& endpoint, const PromptSpec& prompt);

/// The request body `query` would send; exposed for tests and audits.
nlohmann::ordered_json build_request_body(const EndpointConfig& endpoint,
                                          const PromptSpec& prompt);

}  // namespace ekit::client

#endif  // EKIT_CLIENT_HTTP_HPP

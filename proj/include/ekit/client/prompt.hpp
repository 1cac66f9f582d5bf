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

#ifndef EKIT_CLIENT_PROMPT_HPP
#define EKIT_CLIENT_PROMPT_HPP

#include <string>
#include <vector>

#include "ekit/scene/payload.hpp"

namespace ekit::client {

struct PromptSpec {
  scene::TaskFamily family = scene::TaskFamily::Pointing;
  std::string preamble_id;
  std::string system_text;
  std::string user_text;
  std::vector<std::string> images;
  bool thinking = true;

  std::string hash() const;  // stable content hash for audit logs
};

/// Deterministic prompt construction: a family-specific system preamble,
/// the item's user text, and the family's answer-format sentence (appended
/// only when the item text does not already carry it). With thinking on, the
/// system text requests reasoning in think tags followed by the answer tags;
/// otherwise answer tags only.
PromptSpec build_prompt(const scene::QAItem& item, bool thinking);

/// Parse of a raw model response for the expected payload kind: the last
/// answer block wins, a missing think block is tolerated, trailing prose
/// outside the tags is ignored. Never throws.
struct ParseOutcome {
  std::optional<scene::Payload> payload;
  std::string error;
  bool well_formed = false;  // one think block then one answer block

  bool ok() const { return payload.has_value(); }
};

ParseOutcome parse_answer(const std::string& raw_text, scene::PayloadKind expected_kind);

}  // namespace ekit::client

#endif  // EKIT_CLIENT_PROMPT_HPP

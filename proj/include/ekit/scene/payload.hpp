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

#ifndef EKIT_SCENE_PAYLOAD_HPP
#define EKIT_SCENE_PAYLOAD_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ekit/scene/types.hpp"

namespace ekit::scene {

enum class PayloadKind : std::uint8_t { Points, Box, Trajectory, Option, FreeText, Workflow };

const std::string& payload_kind_name(PayloadKind kind);
std::optional<PayloadKind> payload_kind_from_name(const std::string& name);

/// Region used to score point predictions: either a mask or a simple polygon
/// (pixel-space vertices, implicitly closed).
using Polygon = std::vector<PixelPoint>;
using Region = std::variant<Mask2D, Polygon>;

struct PointsPayload {
  std::vector<PixelPoint> points;
  std::optional<Region> region;  // scoring region, when the source provides one
};

struct BoxPayload {
  Box2D box;
};

struct TrajectoryPayload {
  std::vector<PixelPoint> points;
};

struct OptionPayload {
  char letter = 'A';
};

struct FreeTextPayload {
  std::string text;
};

struct WorkflowPayload {
  nlohmann::ordered_json graph;  // serialized task-flow graph, schema owned by temporal
};

using Payload = std::variant<PointsPayload, BoxPayload, TrajectoryPayload, OptionPayload,
                             FreeTextPayload, WorkflowPayload>;

PayloadKind payload_kind(const Payload& payload);

/// Answer-string grammar. `render` produces the exact surface form a model is
/// asked to emit; `parse` accepts that form plus common benign variations
/// (whitespace, trailing punctuation, tuples vs. bracket pairs).
std::string render_payload(const Payload& payload);

struct PayloadParseResult {
  std::optional<Payload> payload;
  std::string error;  // set when payload is empty
  bool ok() const { return payload.has_value(); }
};

PayloadParseResult parse_payload(const std::string& text, PayloadKind kind);

/// Contents of the last <answer>...</answer> block; an absent think block is
/// tolerated, trailing prose outside the tags is ignored.
std::optional<std::string> extract_answer_block(const std::string& text);

/// True iff the text contains exactly one well-formed think block followed
/// by exactly one answer block.
bool well_formed_think_answer(const std::string& text);

/// JSON (de)serialization with a stable field order, used by the shard format.
nlohmann::ordered_json payload_to_json(const Payload& payload);
Payload payload_from_json(const nlohmann::ordered_json& j);

struct Provenance {
  std::string scene_id;
  std::string template_id;
  std::uint64_t seed = 0;
};

/// One synthesized task instance.
struct QAItem {
  std::string id;
  TaskFamily family = TaskFamily::Pointing;
  std::string prompt;
  std::vector<std::string> images;
  PayloadKind target_kind = PayloadKind::Points;
  Payload ground_truth;
  Provenance provenance;
  std::optional<std::pair<int, int>> image_size;  // (width, height) for bounds checks
  std::vector<std::string> options;               // multiple-choice surfaces, in letter order

  /// Ground-truth kind matches target kind; coordinates inside image bounds.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  static QAItem from_json(const nlohmann::ordered_json& j);
};

bool operator==(const QAItem& a, const QAItem& b);

}  // namespace ekit::scene

#endif  // EKIT_SCENE_PAYLOAD_HPP

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

#ifndef EKIT_EVAL_METRICS_HPP
#define EKIT_EVAL_METRICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ekit/scene/payload.hpp"
#include "ekit/temporal/workflow.hpp"

namespace ekit::eval {

/// Fraction of predicted points strictly inside the region. An empty
/// prediction scores 0; a degenerate region (no area / no foreground) is an
/// error. Point order never matters.
double point_in_region_score(const std::vector<scene::PixelPoint>& points,
                             const scene::Region& region);

bool point_strictly_inside(const scene::PixelPoint& point, const scene::Region& region);

double box_iou(const scene::Box2D& a, const scene::Box2D& b);

struct AffordanceScore {
  double iou = 0.0;
  bool hit = false;
};

AffordanceScore affordance_score(const scene::Box2D& pred, const scene::Box2D& gt,
                                 double threshold = 0.5);

/// Discrete Frechet distance via the standard dynamic program: the minimum
/// over monotone couplings of the maximum pairwise Euclidean distance.
/// When `normalize` is given, coordinates are divided by (width, height)
/// first. Symmetric in its arguments; throws on an empty sequence.
double discrete_frechet(const std::vector<scene::PixelPoint>& a,
                        const std::vector<scene::PixelPoint>& b,
                        std::optional<std::pair<int, int>> normalize = std::nullopt);

/// A model response joined to an item by id: raw text plus its parse result.
struct Prediction {
  std::string item_id;
  std::string raw_text;
  std::optional<scene::Payload> payload;
  std::string parse_error;  // set when payload is absent

  bool parsed() const { return payload.has_value(); }
};

/// Mean exact option-letter match; parse failures and missing predictions
/// count as wrong. A prediction whose id matches no item is an error.
double mc_accuracy(const std::vector<Prediction>& predictions,
                   const std::vector<scene::QAItem>& items);

struct PlanScore {
  double score = 0.0;
  std::string diagnostics;
};

/// Harmonic mean of subtask F1 (canonicalized description + robot must both
/// match) and precedence-pair agreement over matched subtasks (vacuously 1
/// with fewer than two matches). Invalid predictions score 0 with a message.
PlanScore plan_score(const temporal::WorkflowGraph& pred, const temporal::WorkflowGraph& ref);

}  // namespace ekit::eval

#endif  // EKIT_EVAL_METRICS_HPP

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

#ifndef EKIT_EVAL_REWARD_HPP
#define EKIT_EVAL_REWARD_HPP

#include "ekit/eval/metrics.hpp"
#include "ekit/scene/payload.hpp"

namespace ekit::eval {

struct RewardConfig {
  double accuracy_weight = 1.0;
  double format_weight = 0.1;
  double iou_threshold = 0.5;
  /// Radius (pixels) for scoring point answers against point-only ground
  /// truth, when the item carries no region. Relative to the image diagonal
  /// when image_size is present.
  double point_tolerance_fraction = 0.05;
  double point_tolerance_px = 10.0;
};

struct Reward {
  int format = 0;          // 1 iff one well-formed think block then one answer block
  double accuracy = 0.0;   // family-appropriate score of the parsed answer
  double composite = 0.0;  // accuracy_weight * accuracy + format_weight * format
  std::string detail;
};

/// Verifiable composite reward over a raw model response. Never throws: the
/// worst case is {0, 0, 0} with a reason in `detail`.
Reward rlvr_reward(const std::string& raw_text, const scene::QAItem& item,
                   const RewardConfig& config = {});

/// Family-appropriate accuracy of an already-parsed payload in [0, 1]:
/// option match, point-in-region (or tolerance match without a region),
/// IoU hit, inverse-scaled Frechet distance for trajectories, canonical text
/// match, plan score for workflows.
double score_payload(const scene::Payload& payload, const scene::QAItem& item,
                     const RewardConfig& config = {});

}  // namespace ekit::eval

#endif  // EKIT_EVAL_REWARD_HPP

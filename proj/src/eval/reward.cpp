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

#include "ekit/eval/reward.hpp"

#include <cmath>

namespace ekit::eval {

using scene::Payload;
using scene::PayloadKind;
using scene::QAItem;

namespace {

double point_tolerance(const QAItem& item, const RewardConfig& config) {
  if (item.image_size) {
    const double w = item.image_size->first;
    const double h = item.image_size->second;
    return config.point_tolerance_fraction * std::sqrt(w * w + h * h);
  }
  return config.point_tolerance_px;
}

double score_points(const std::vector<scene::PixelPoint>& predicted, const QAItem& item,
                    const RewardConfig& config) {
  const auto& gt = std::get<scene::PointsPayload>(item.ground_truth);
  if (predicted.empty()) return 0.0;
  if (gt.region) return point_in_region_score(predicted, *gt.region);
  // region-less ground truth: fraction of predicted points within tolerance
  // of some reference point
  const double radius = point_tolerance(item, config);
  std::size_t hits = 0;
  for (const auto& p : predicted) {
    for (const auto& q : gt.points) {
      const double dx = p.x - q.x;
      const double dy = p.y - q.y;
      if (std::sqrt(dx * dx + dy * dy) <= radius) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace

double score_payload(const Payload& payload, const QAItem& item, const RewardConfig& config) {
  if (scene::payload_kind(payload) != item.target_kind) return 0.0;
  switch (item.target_kind) {
    case PayloadKind::Option:
      return std::get<scene::OptionPayload>(payload).letter ==
                     std::get<scene::OptionPayload>(item.ground_truth).letter
                 ? 1.0
                 : 0.0;
    case PayloadKind::Box: {
      const auto score = affordance_score(std::get<scene::BoxPayload>(payload).box,
                                          std::get<scene::BoxPayload>(item.ground_truth).box,
                                          config.iou_threshold);
      return score.hit ? 1.0 : 0.0;
    }
    case PayloadKind::Points:
      return score_points(std::get<scene::PointsPayload>(payload).points, item, config);
    case PayloadKind::Trajectory: {
      const auto& gt = std::get<scene::TrajectoryPayload>(item.ground_truth);
      const auto& pred = std::get<scene::TrajectoryPayload>(payload);
      if (pred.points.empty()) return 0.0;
      const auto dfd = discrete_frechet(pred.points, gt.points, item.image_size);
      return 1.0 / (1.0 + dfd);
    }
    case PayloadKind::FreeText:
      return canonical_text(std::get<scene::FreeTextPayload>(payload).text) ==
                     canonical_text(std::get<scene::FreeTextPayload>(item.ground_truth).text)
                 ? 1.0
                 : 0.0;
    case PayloadKind::Workflow: {
      try {
        const auto pred = temporal::workflow_from_json(
            std::get<scene::WorkflowPayload>(payload).graph);
        const auto ref = temporal::workflow_from_json(
            std::get<scene::WorkflowPayload>(item.ground_truth).graph);
        return plan_score(pred, ref).score;
      } catch (const std::exception&) {
        return 0.0;
      }
    }
  }
  return 0.0;
}

Reward rlvr_reward(const std::string& raw_text, const QAItem& item, const RewardConfig& config) {
  Reward reward;
  try {
    reward.format = scene::well_formed_think_answer(raw_text) ? 1 : 0;
    const auto block = scene::extract_answer_block(raw_text);
    if (!block) {
      reward.detail = "no answer block";
    } else {
      const auto parsed = scene::parse_payload(*block, item.target_kind);
      if (!parsed.ok()) {
        reward.detail = "parse failure: " + parsed.error;
      } else {
        reward.accuracy = score_payload(*parsed.payload, item, config);
        reward.detail = "scored";
      }
    }
  } catch (const std::exception& e) {
    reward.detail = std::string("reward exception: ") + e.what();
    reward.accuracy = 0.0;
  }
  reward.composite = config.accuracy_weight * reward.accuracy +
                     config.format_weight * static_cast<double>(reward.format);
  return reward;
}

}  // namespace ekit::eval

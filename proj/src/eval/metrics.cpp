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

#include "ekit/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ekit::eval {

using scene::Box2D;
using scene::Mask2D;
using scene::PixelPoint;
using scene::Polygon;
using scene::Region;

namespace {

bool inside_polygon(const PixelPoint& p, const Polygon& polygon) {
  // crossing number; points on an edge count as outside (strict interior)
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = polygon[i];
    const auto& b = polygon[j];
    // on-segment check
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross == 0.0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
        std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y)) {
      return false;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double polygon_area(const Polygon& polygon) {
  double area = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    area += polygon[j].x * polygon[i].y - polygon[i].x * polygon[j].y;
  }
  return std::abs(area) / 2.0;
}

}  // namespace

bool point_strictly_inside(const PixelPoint& point, const Region& region) {
  if (std::holds_alternative<Mask2D>(region)) {
    const auto& mask = std::get<Mask2D>(region);
    return mask.contains(static_cast<int>(std::floor(point.x)),
                         static_cast<int>(std::floor(point.y)));
  }
  return inside_polygon(point, std::get<Polygon>(region));
}

double point_in_region_score(const std::vector<PixelPoint>& points, const Region& region) {
  if (std::holds_alternative<Polygon>(region)) {
    const auto& polygon = std::get<Polygon>(region);
    if (polygon.size() < 3 || polygon_area(polygon) == 0.0) {
      fail("point_in_region_score: degenerate polygon region");
    }
  } else {
    const auto& mask = std::get<Mask2D>(region);
    if (mask.foreground_count() == 0) fail("point_in_region_score: empty mask region");
  }
  if (points.empty()) return 0.0;
  std::size_t inside = 0;
  for (const auto& point : points) {
    if (point_strictly_inside(point, region)) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(points.size());
}

double box_iou(const Box2D& a, const Box2D& b) {
  const double ix1 = std::max(a.x1, b.x1);
  const double iy1 = std::max(a.y1, b.y1);
  const double ix2 = std::min(a.x2, b.x2);
  const double iy2 = std::min(a.y2, b.y2);
  const double iw = std::max(0.0, ix2 - ix1);
  const double ih = std::max(0.0, iy2 - iy1);
  const double intersection = iw * ih;
  const double total = a.area() + b.area() - intersection;
  if (total <= 0.0) return 0.0;
  return intersection / total;
}

AffordanceScore affordance_score(const Box2D& pred, const Box2D& gt, double threshold) {
  AffordanceScore score;
  score.iou = box_iou(pred, gt);
  score.hit = score.iou >= threshold;
  return score;
}

double discrete_frechet(const std::vector<PixelPoint>& a, const std::vector<PixelPoint>& b,
                        std::optional<std::pair<int, int>> normalize) {
  if (a.empty() || b.empty()) fail("discrete_frechet: empty sequence");
  const auto scale = [&](const PixelPoint& p) -> PixelPoint {
    if (!normalize) return p;
    return {p.x / normalize->first, p.y / normalize->second};
  };
  const auto dist = [&](std::size_t i, std::size_t j) {
    const auto p = scale(a[i]);
    const auto q = scale(b[j]);
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return std::sqrt(dx * dx + dy * dy);
  };
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<double> table(m * n, 0.0);
  const auto at = [&](std::size_t i, std::size_t j) -> double& { return table[i * n + j]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dist(i, j);
      if (i == 0 && j == 0) {
        at(i, j) = d;
      } else if (i == 0) {
        at(i, j) = std::max(at(0, j - 1), d);
      } else if (j == 0) {
        at(i, j) = std::max(at(i - 1, 0), d);
      } else {
        at(i, j) =
            std::max(std::min({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1)}), d);
      }
    }
  }
  return at(m - 1, n - 1);
}

double mc_accuracy(const std::vector<Prediction>& predictions,
                   const std::vector<scene::QAItem>& items) {
  if (items.empty()) fail("mc_accuracy: no items");
  std::map<std::string, const scene::QAItem*> by_id;
  for (const auto& item : items) by_id[item.id] = &item;
  std::map<std::string, const Prediction*> answer_of;
  for (const auto& prediction : predictions) {
    if (!by_id.count(prediction.item_id)) {
      fail("mc_accuracy: prediction for unknown item " + prediction.item_id);
    }
    answer_of[prediction.item_id] = &prediction;
  }
  std::size_t correct = 0;
  for (const auto& item : items) {
    const auto it = answer_of.find(item.id);
    if (it == answer_of.end() || !it->second->parsed()) continue;  // wrong
    const auto& payload = *it->second->payload;
    if (scene::payload_kind(payload) != scene::PayloadKind::Option) continue;
    if (std::get<scene::OptionPayload>(payload).letter ==
        std::get<scene::OptionPayload>(item.ground_truth).letter) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(items.size());
}

namespace {

/// Reachability set per node (transitive closure by repeated DFS).
std::map<std::string, std::set<std::string>> reachability(const temporal::WorkflowGraph& graph) {
  std::map<std::string, std::vector<std::string>> successors;
  for (const auto& subtask : graph.subtasks) {
    for (const auto& pred : subtask.predecessors) successors[pred].push_back(subtask.id);
  }
  std::map<std::string, std::set<std::string>> reach;
  for (const auto& subtask : graph.subtasks) {
    std::vector<std::string> stack = successors[subtask.id];
    auto& seen = reach[subtask.id];
    while (!stack.empty()) {
      const auto current = stack.back();
      stack.pop_back();
      if (!seen.insert(current).second) continue;
      for (const auto& next : successors[current]) stack.push_back(next);
    }
  }
  return reach;
}

int precedence_relation(const std::map<std::string, std::set<std::string>>& reach,
                        const std::string& a, const std::string& b) {
  if (reach.at(a).count(b)) return -1;  // a before b
  if (reach.at(b).count(a)) return 1;   // b before a
  return 0;                             // incomparable
}

}  // namespace

PlanScore plan_score(const temporal::WorkflowGraph& pred, const temporal::WorkflowGraph& ref) {
  try {
    pred.topological_order();
  } catch (const Error&) {
    return {0.0, "invalid: cycle"};
  }
  if (pred.subtasks.empty()) return {0.0, "invalid: empty graph"};

  // greedy 1:1 matching on (canonical description, robot)
  std::vector<std::pair<std::string, std::string>> matches;  // (pred id, ref id)
  std::set<std::string> used_ref;
  for (const auto& p : pred.subtasks) {
    for (const auto& r : ref.subtasks) {
      if (used_ref.count(r.id)) continue;
      if (canonical_text(p.description) == canonical_text(r.description) && p.robot == r.robot) {
        matches.emplace_back(p.id, r.id);
        used_ref.insert(r.id);
        break;
      }
    }
  }
  const double f1 = 2.0 * static_cast<double>(matches.size()) /
                    static_cast<double>(pred.subtasks.size() + ref.subtasks.size());
  if (matches.size() < 1 || f1 == 0.0) return {0.0, "no matching subtasks"};

  double precedence = 1.0;  // vacuous with fewer than two matches
  if (matches.size() >= 2) {
    const auto pred_reach = reachability(pred);
    const auto ref_reach = reachability(ref);
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
      for (std::size_t j = i + 1; j < matches.size(); ++j) {
        const int rp = precedence_relation(pred_reach, matches[i].first, matches[j].first);
        const int rr = precedence_relation(ref_reach, matches[i].second, matches[j].second);
        ++total;
        if (rp == rr) ++agree;
      }
    }
    precedence = static_cast<double>(agree) / static_cast<double>(total);
  }

  if (f1 + precedence == 0.0) return {0.0, "zero components"};
  const double score = 2.0 * f1 * precedence / (f1 + precedence);
  return {score, "matched " + std::to_string(matches.size()) + " of " +
                     std::to_string(ref.subtasks.size()) + " reference subtasks"};
}

}  // namespace ekit::eval

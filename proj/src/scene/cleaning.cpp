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

#include "ekit/scene/cleaning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ekit::scene {

nlohmann::ordered_json CleaningLogEntry::to_json() const {
  nlohmann::ordered_json j;
  j["source_id"] = source_id;
  j["rule"] = rule;
  j["action"] = action;
  return j;
}

namespace {

double clamp_pixel(double v, int limit) {
  return std::min(std::max(v, 0.0), static_cast<double>(limit - 1));
}

}  // namespace

CleaningResult clean_point_annotations(const std::vector<PointAnnotationGroup>& raw,
                                       int image_width, int image_height,
                                       std::size_t max_points, CoordMode coord_mode,
                                       std::uint64_t seed) {
  if (image_width <= 0 || image_height <= 0) fail("clean_point_annotations: invalid image dims");
  if (max_points == 0) fail("clean_point_annotations: max_points must be >= 1");

  CleaningResult result;
  for (const auto& group : raw) {
    for (const auto& p : group.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        fail("clean_point_annotations: non-finite point in " + group.source_id);
      }
    }
    if (group.points.size() > kDiscardThreshold) {
      result.log.push_back({group.source_id, "max_labeled_points", "discarded"});
      continue;
    }

    PointAnnotationGroup cleaned;
    cleaned.source_id = group.source_id;
    cleaned.label = group.label;

    std::vector<PixelPoint> points = group.points;
    if (points.size() > max_points) {
      Rng rng(derive_seed(seed, {group.source_id, group.label}));
      const auto keep = rng.sample_without_replacement(points.size(), max_points);
      std::vector<PixelPoint> kept;
      kept.reserve(keep.size());
      for (const auto index : keep) kept.push_back(points[index]);
      points = std::move(kept);
      result.log.push_back({group.source_id, "resample_cap", "resampled"});
    }

    cleaned.points.reserve(points.size());
    for (const auto& p : points) {
      double x = p.x;
      double y = p.y;
      if (coord_mode == CoordMode::Normalized) {
        x = std::round(x * image_width);
        y = std::round(y * image_height);
      } else {
        x = std::round(x);
        y = std::round(y);
      }
      cleaned.points.push_back({clamp_pixel(x, image_width), clamp_pixel(y, image_height)});
    }
    result.groups.push_back(std::move(cleaned));
  }
  return result;
}

void append_cleaning_log(const std::vector<CleaningLogEntry>& entries, const std::string& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) fail("cannot write cleaning log: " + path);
  for (const auto& entry : entries) out << entry.to_json().dump() << '\n';
}

}  // namespace ekit::scene

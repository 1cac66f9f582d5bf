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

#ifndef EKIT_SCENE_CLEANING_HPP
#define EKIT_SCENE_CLEANING_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ekit/scene/types.hpp"

namespace ekit::scene {

enum class CoordMode { Normalized, Absolute };

/// One label group of a point annotation source: all points that answer one
/// label for one source item.
struct PointAnnotationGroup {
  std::string source_id;
  std::string label;
  std::vector<PixelPoint> points;
};

struct CleaningLogEntry {
  std::string source_id;
  std::string rule;    // "max_labeled_points" | "resample_cap"
  std::string action;  // "discarded" | "resampled"

  nlohmann::ordered_json to_json() const;
};

struct CleaningResult {
  std::vector<PointAnnotationGroup> groups;  // absolute integer pixel coordinates
  std::vector<CleaningLogEntry> log;
};

/// Annotation-cleaning rules for pointing sources:
///  - a label group with more than `kDiscardThreshold` labeled points is
///    dropped entirely and logged;
///  - retained answers are resampled to at most `max_points` points,
///    deterministic per (source_id, label, seed), uniform without replacement;
///  - normalized coordinates are scaled by (width, height) and rounded to the
///    nearest integer pixel; everything is clamped into image bounds.
/// Cleaning an already-clean set (in absolute mode) is a no-op.
inline constexpr std::size_t kDiscardThreshold = 10;

CleaningResult clean_point_annotations(const std::vector<PointAnnotationGroup>& raw,
                                       int image_width, int image_height,
                                       std::size_t max_points, CoordMode coord_mode,
                                       std::uint64_t seed);

void append_cleaning_log(const std::vector<CleaningLogEntry>& entries, const std::string& path);

}  // namespace ekit::scene

#endif  // EKIT_SCENE_CLEANING_HPP

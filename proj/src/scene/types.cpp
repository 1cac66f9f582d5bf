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

#include "ekit/scene/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ekit::scene {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) fail("intrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0) fail("intrinsics: image size must be positive");
  if (cx < 0.0 || cx > width) fail("intrinsics: cx outside [0, width]");
  if (cy < 0.0 || cy > height) fail("intrinsics: cy outside [0, height]");
}

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

void Box2D::validate(const std::string& context) const {
  if (!(x1 < x2) || !(y1 < y2)) {
    fail(context + ": box inversion (" + std::to_string(x1) + "," + std::to_string(y1) + "," +
         std::to_string(x2) + "," + std::to_string(y2) + ")");
  }
}

void Mask2D::validate(const std::string& context) const {
  if (width <= 0 || height <= 0) fail(context + ": mask dimensions must be positive");
  std::uint64_t total = 0;
  for (const auto run : runs) total += run;
  const auto expected = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  if (total != expected) {
    fail(context + ": mask run lengths sum to " + std::to_string(total) + ", expected " +
         std::to_string(expected));
  }
  if (foreground_count() == 0) fail(context + ": mask has empty foreground");
}

std::vector<std::uint8_t> Mask2D::decode() const {
  std::vector<std::uint8_t> pixels;
  pixels.reserve(static_cast<std::size_t>(width) * height);
  std::uint8_t value = 0;  // runs start with background
  for (const auto run : runs) {
    pixels.insert(pixels.end(), run, value);
    value = static_cast<std::uint8_t>(1 - value);
  }
  return pixels;
}

std::size_t Mask2D::foreground_count() const {
  std::size_t count = 0;
  bool foreground = false;
  for (const auto run : runs) {
    if (foreground) count += run;
    foreground = !foreground;
  }
  return count;
}

std::pair<int, int> Mask2D::centroid() const {
  const auto pixels = decode();
  std::uint64_t sum_x = 0, sum_y = 0, n = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (pixels[static_cast<std::size_t>(y) * width + x]) {
        sum_x += static_cast<std::uint64_t>(x);
        sum_y += static_cast<std::uint64_t>(y);
        ++n;
      }
    }
  }
  if (n == 0) fail("mask centroid: empty foreground");
  const auto round_div = [](std::uint64_t a, std::uint64_t b) {
    return static_cast<int>((a + b / 2) / b);
  };
  return {round_div(sum_x, n), round_div(sum_y, n)};
}

bool Mask2D::contains(int x, int y) const {
  if (x < 0 || y < 0 || x >= width || y >= height) return false;
  const auto target = static_cast<std::uint64_t>(y) * width + x;
  std::uint64_t pos = 0;
  bool foreground = false;
  for (const auto run : runs) {
    if (target < pos + run) return foreground;
    pos += run;
    foreground = !foreground;
  }
  return false;
}

void Box3D::validate(const std::string& context) const {
  if (!(min_x < max_x && min_y < max_y && min_z < max_z)) {
    fail(context + ": 3D box requires min < max per axis");
  }
}

namespace {

std::vector<ConceptInfo> build_catalog() {
  using T = ConceptTag;
  using F = ConceptFamily;
  return {
      {T::LeftOf, F::Position, "left_of"},
      {T::RightOf, F::Position, "right_of"},
      {T::InFrontOf, F::Position, "in_front_of"},
      {T::Behind, F::Position, "behind"},
      {T::Above, F::Position, "above"},
      {T::Below, F::Position, "below"},
      {T::OnTopOf, F::Position, "on_top_of"},
      {T::Inside, F::Position, "inside"},
      {T::Between, F::Position, "between"},
      {T::DirFront, F::Direction, "dir_front"},
      {T::DirFrontRight, F::Direction, "dir_front_right"},
      {T::DirRight, F::Direction, "dir_right"},
      {T::DirBackRight, F::Direction, "dir_back_right"},
      {T::DirBack, F::Direction, "dir_back"},
      {T::DirBackLeft, F::Direction, "dir_back_left"},
      {T::DirLeft, F::Direction, "dir_left"},
      {T::DirFrontLeft, F::Direction, "dir_front_left"},
      {T::DistanceBetween, F::Distance, "distance_between"},
      {T::Nearest, F::Distance, "nearest"},
      {T::Farthest, F::Distance, "farthest"},
      {T::WiderThan, F::Size, "wider_than"},
      {T::TallerThan, F::Size, "taller_than"},
      {T::DeeperThan, F::Size, "deeper_than"},
      {T::LargerThan, F::Size, "larger_than"},
      {T::Tallest, F::Size, "tallest"},
      {T::Shortest, F::Size, "shortest"},
      {T::Largest, F::Size, "largest"},
      {T::Smallest, F::Size, "smallest"},
      {T::OrdinalFromLeft, F::Ordinal, "ordinal_from_left"},
      {T::OrdinalFromRight, F::Ordinal, "ordinal_from_right"},
      {T::OrdinalFromTop, F::Ordinal, "ordinal_from_top"},
      {T::OrdinalFromFront, F::Ordinal, "ordinal_from_front"},
      {T::FacingToward, F::Orientation, "facing_toward"},
      {T::FacingAway, F::Orientation, "facing_away"},
      {T::VacantToward, F::Vacancy, "vacant_toward"},
  };
}

}  // namespace

const std::vector<ConceptInfo>& concept_catalog() {
  static const std::vector<ConceptInfo> catalog = build_catalog();
  return catalog;
}

const ConceptInfo& concept_info(ConceptTag tag) {
  for (const auto& info : concept_catalog()) {
    if (info.tag == tag) return info;
  }
  fail("concept tag not in catalog");
}

std::optional<ConceptTag> concept_from_name(const std::string& name) {
  for (const auto& info : concept_catalog()) {
    if (info.name == name) return info.tag;
  }
  return std::nullopt;
}

const std::string& concept_name(ConceptTag tag) { return concept_info(tag).name; }

const FrameRef& SceneGraph::primary_frame() const {
  if (frames.empty()) fail("scene " + scene_id + ": no frames");
  return frames.front();
}

const ObjectNode* SceneGraph::find_node(const std::string& id) const {
  for (const auto& node : nodes) {
    if (node.id == id) return &node;
  }
  return nullptr;
}

const ObjectNode& SceneGraph::node_or_fail(const std::string& id) const {
  const auto* node = find_node(id);
  if (!node) fail("scene " + scene_id + ": unknown node " + id);
  return *node;
}

std::vector<const ObjectNode*> SceneGraph::nodes_of_category(const std::string& category) const {
  std::vector<const ObjectNode*> out;
  for (const auto& node : nodes) {
    if (node.category == category) out.push_back(&node);
  }
  return out;
}

void SceneGraph::validate() const {
  if (scene_id.empty()) fail("scene: missing scene_id");
  if (frames.empty()) fail("scene " + scene_id + ": at least one frame required");
  for (const auto& frame : frames) {
    if (frame.width <= 0 || frame.height <= 0) {
      fail("scene " + scene_id + ", frame " + frame.id + ": invalid dimensions");
    }
    if (frame.intrinsics) frame.intrinsics->validate();
  }
  std::map<std::string, int> seen;
  for (const auto& node : nodes) {
    if (node.id.empty()) fail("scene " + scene_id + ": node with empty id");
    if (++seen[node.id] > 1) fail("scene " + scene_id + ": duplicate node id " + node.id);
    node.box.validate("scene " + scene_id + ", node " + node.id);
    if (node.mask) node.mask->validate("scene " + scene_id + ", node " + node.id);
    if (node.box3d) node.box3d->validate("scene " + scene_id + ", node " + node.id);
    for (const auto& part : node.parts) {
      part.box.validate("scene " + scene_id + ", node " + node.id + ", part " + part.name);
    }
  }
  for (const auto& edge : edges) {
    if (edge.subject == edge.object) {
      fail("scene " + scene_id + ": self-edge on " + edge.subject);
    }
    for (const auto* endpoint : {&edge.subject, &edge.object}) {
      if (!find_node(*endpoint)) fail("dangling endpoint " + *endpoint);
    }
  }
  if (embodiment) {
    for (const auto& name : embodiment->objects) {
      const bool known = std::any_of(nodes.begin(), nodes.end(),
                                     [&](const ObjectNode& n) { return n.category == name; });
      if (!known) {
        fail("scene " + scene_id + ": embodiment object '" + name +
             "' does not match any node category");
      }
    }
  }
}

namespace {
const std::vector<std::pair<TaskFamily, std::string>>& family_table() {
  static const std::vector<std::pair<TaskFamily, std::string>> table = {
      {TaskFamily::Pointing, "pointing"},       {TaskFamily::Grounding, "grounding"},
      {TaskFamily::Affordance, "affordance"},   {TaskFamily::Referring, "referring"},
      {TaskFamily::Placement, "placement"},     {TaskFamily::SpatialMC, "spatial_mc"},
      {TaskFamily::EgoPlan, "egoplan"},         {TaskFamily::MultiRobot, "multirobot"},
      {TaskFamily::CloseLoop, "closeloop"},
  };
  return table;
}
}  // namespace

const std::string& family_name(TaskFamily family) {
  for (const auto& [f, name] : family_table()) {
    if (f == family) return name;
  }
  fail("unknown task family");
}

std::optional<TaskFamily> family_from_name(const std::string& name) {
  for (const auto& [f, n] : family_table()) {
    if (n == name) return f;
  }
  return std::nullopt;
}

}  // namespace ekit::scene

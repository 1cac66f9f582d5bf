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

#ifndef EKIT_SCENE_TYPES_HPP
#define EKIT_SCENE_TYPES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ekit/common.hpp"

namespace ekit::scene {

/// Pinhole parameters in pixels. Camera frame: +x right, +y down, +z forward.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const;
};

/// Row-major metric depth with a per-pixel validity flag. Valid means finite
/// and strictly positive.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> depth;
  std::vector<std::uint8_t> valid;

  float at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
  bool is_valid(int u, int v) const { return valid[static_cast<std::size_t>(v) * width + u] != 0; }
  std::size_t valid_count() const;
};

/// Axis-aligned 2D box, pixel coordinates, origin top-left.
/// (x1, y1) is the top-left corner, (x2, y2) the bottom-right.
struct Box2D {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }
  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }

  void validate(const std::string& context) const;
};

/// Run-length-encoded binary mask, row-major. `runs` alternate background /
/// foreground counts, starting with background. Sum of runs = width*height.
struct Mask2D {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> runs;

  void validate(const std::string& context) const;
  std::vector<std::uint8_t> decode() const;
  std::size_t foreground_count() const;
  /// Integer centroid of foreground pixels, rounded to nearest.
  std::pair<int, int> centroid() const;
  bool contains(int x, int y) const;
};

/// Axis-aligned 3D box in meters, camera frame (+x right, +y down, +z forward).
struct Box3D {
  double min_x = 0.0, min_y = 0.0, min_z = 0.0;
  double max_x = 0.0, max_y = 0.0, max_z = 0.0;

  std::array<double, 3> center() const {
    return {0.5 * (min_x + max_x), 0.5 * (min_y + max_y), 0.5 * (min_z + max_z)};
  }
  double extent_x() const { return max_x - min_x; }
  double extent_y() const { return max_y - min_y; }
  double extent_z() const { return max_z - min_z; }
  double volume() const { return extent_x() * extent_y() * extent_z(); }

  void validate(const std::string& context) const;
};

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Spatial concept catalog. Tags are grouped by family; every relation edge
/// and QA template refers to one of these.
enum class ConceptTag : std::uint8_t {
  // position
  LeftOf, RightOf, InFrontOf, Behind, Above, Below, OnTopOf, Inside, Between,
  // direction (viewer-centric 8-way bearing on the ground plane)
  DirFront, DirFrontRight, DirRight, DirBackRight, DirBack, DirBackLeft, DirLeft, DirFrontLeft,
  // distance
  DistanceBetween, Nearest, Farthest,
  // size
  WiderThan, TallerThan, DeeperThan, LargerThan, Tallest, Shortest, Largest, Smallest,
  // ordinal
  OrdinalFromLeft, OrdinalFromRight, OrdinalFromTop, OrdinalFromFront,
  // orientation
  FacingToward, FacingAway,
  // vacancy
  VacantToward,
};

enum class ConceptFamily { Position, Direction, Distance, Size, Ordinal, Orientation, Vacancy };

struct ConceptInfo {
  ConceptTag tag;
  ConceptFamily family;
  std::string name;
};

/// The full catalog, in a fixed order. Size is asserted >= 31 in tests.
const std::vector<ConceptInfo>& concept_catalog();
const ConceptInfo& concept_info(ConceptTag tag);
std::optional<ConceptTag> concept_from_name(const std::string& name);
const std::string& concept_name(ConceptTag tag);

struct PartAnnotation {
  std::string name;
  Box2D box;
  std::optional<std::string> function;  // e.g. "grasped to carry it"
};

struct CaptionSet {
  std::optional<std::string> coarse;
  std::optional<std::string> attributed;
  std::optional<std::string> unique;
};

struct ObjectNode {
  std::string id;
  std::string category;
  Box2D box;
  std::optional<Mask2D> mask;
  std::optional<std::string> point_cloud;  // handle: path to a sidecar blob
  std::optional<Box3D> box3d;
  CaptionSet captions;
  std::vector<std::string> attributes;
  std::vector<std::string> functions;  // whole-object affordance phrases
  std::vector<PartAnnotation> parts;
};

struct RelationEdge {
  std::string subject;
  std::string object;
  ConceptTag tag;
  std::optional<double> value;
  std::optional<std::string> unit;  // "m", "deg", "rank"
};

struct EmbodimentConfig {
  std::string name;      // e.g. "KitchenTable1"
  std::string type;      // e.g. "table"
  std::vector<std::string> objects;
  std::string robot;     // e.g. "RealMan-single-arm"
};

struct FrameRef {
  std::string id;
  std::string image;  // path or URL; never decoded here
  int width = 0;
  int height = 0;
  std::optional<CameraIntrinsics> intrinsics;
  std::optional<std::string> depth_path;
  std::optional<std::string> depth_sidecar;
};

/// 3x3 rotation applied to camera-frame points before building top-down
/// occupancy, for scenes whose camera is not gravity-aligned.
using Rotation3 = std::array<std::array<double, 3>, 3>;

struct SceneGraph {
  std::string scene_id;
  std::vector<FrameRef> frames;
  std::vector<ObjectNode> nodes;
  std::vector<RelationEdge> edges;
  std::optional<EmbodimentConfig> embodiment;
  std::optional<Rotation3> gravity_rotation;

  const FrameRef& primary_frame() const;
  const ObjectNode* find_node(const std::string& id) const;
  const ObjectNode& node_or_fail(const std::string& id) const;
  std::vector<const ObjectNode*> nodes_of_category(const std::string& category) const;

  /// Enforces all invariants; throws ekit::Error with a field-level message.
  void validate() const;
};

enum class TaskFamily : std::uint8_t {
  Pointing, Grounding, Affordance, Referring, Placement, SpatialMC,
  EgoPlan, MultiRobot, CloseLoop,
};

const std::string& family_name(TaskFamily family);
std::optional<TaskFamily> family_from_name(const std::string& name);

}  // namespace ekit::scene

#endif  // EKIT_SCENE_TYPES_HPP

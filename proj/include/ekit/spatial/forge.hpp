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

#ifndef EKIT_SPATIAL_FORGE_HPP
#define EKIT_SPATIAL_FORGE_HPP

#include <set>
#include <string>
#include <vector>

#include "ekit/geom/occupancy.hpp"
#include "ekit/scene/payload.hpp"
#include "ekit/spatial/captions.hpp"
#include "ekit/spatial/templates.hpp"

namespace ekit::spatial {

struct SpatialForgeOptions {
  std::uint64_t seed = 0;
  std::size_t max_points = 10;
  int mc_options = 4;
  double cell_size = 0.05;   // meters, occupancy grid
  double grid_margin = 0.5;  // meters
  std::vector<double> placement_offsets = {0.05, 0.10, 0.15, 0.20, 0.30, 0.50};  // meters
  const TemplatePack* templates = nullptr;  // default pack when null

  const TemplatePack& pack() const { return templates ? *templates : default_template_pack(); }
};

/// Per-subject skip record; ineligible inputs are logged, never fatal.
struct ForgeSkip {
  std::string scene_id;
  scene::TaskFamily family = scene::TaskFamily::Pointing;
  std::string subject;
  std::string reason;

  nlohmann::ordered_json to_json() const;
};

struct ForgeOutput {
  std::vector<scene::QAItem> items;
  std::vector<ForgeSkip> skips;

  void merge(ForgeOutput other);
};

/// Mask centroid when a mask is present, box center otherwise; rounded to
/// integer pixels and clamped into image bounds.
scene::PixelPoint node_point(const scene::ObjectNode& node, int width, int height);

ForgeOutput gen_pointing(const scene::SceneGraph& scene, const SpatialForgeOptions& options);
ForgeOutput gen_grounding(const scene::SceneGraph& scene, const SpatialForgeOptions& options);
ForgeOutput gen_affordance(const scene::SceneGraph& scene, const SpatialForgeOptions& options);
ForgeOutput gen_referring(const scene::SceneGraph& scene, const SpatialForgeOptions& options);
ForgeOutput gen_placement(const scene::SceneGraph& scene, const geom::OccupancyGrid& grid,
                          const SpatialForgeOptions& options);
ForgeOutput gen_spatial_mc(const scene::SceneGraph& scene, const SpatialForgeOptions& options);

/// Runs the requested families over one scene, building the occupancy grid
/// on demand for placement.
ForgeOutput forge_spatial(const scene::SceneGraph& scene,
                          const std::set<scene::TaskFamily>& families,
                          const SpatialForgeOptions& options);

}  // namespace ekit::spatial

#endif  // EKIT_SPATIAL_FORGE_HPP

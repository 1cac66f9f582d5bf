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

#ifndef EKIT_GEOM_OCCUPANCY_HPP
#define EKIT_GEOM_OCCUPANCY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ekit/geom/camera.hpp"
#include "ekit/scene/types.hpp"

namespace ekit::geom {

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

/// Ground-plane footprint in the gravity-aligned frame: x right, z forward,
/// y down. `ground_y` is the object's base height (max y, since y points down).
struct Footprint {
  double min_x = 0.0, min_z = 0.0, max_x = 0.0, max_z = 0.0;
  double ground_y = 0.0;
};

/// Top-down occupancy map. Rows index z, columns index x; the grid origin is
/// snapped to multiples of cell_size so grid-aligned footprints rasterize
/// exactly.
struct OccupancyGrid {
  double cell_size = 0.0;
  double origin_x = 0.0;  // world x of column 0's near edge
  double origin_z = 0.0;  // world z of row 0's near edge
  int rows = 0;
  int cols = 0;
  std::vector<CellState> cells;
  std::vector<std::int32_t> owner;  // index into object_ids, -1 when free
  std::vector<std::string> object_ids;
  std::map<std::string, Footprint> footprints;
  std::optional<scene::Rotation3> gravity_rotation;  // camera -> gravity frame
  std::optional<scene::CameraIntrinsics> intrinsics;

  CellState at(int row, int col) const { return cells[static_cast<std::size_t>(row) * cols + col]; }
  const std::string* owner_at(int row, int col) const;
  /// [min_x, min_z, max_x, max_z] of the cell.
  std::array<double, 4> cell_bounds(int row, int col) const;
  std::optional<std::pair<int, int>> cell_of(double x, double z) const;
  std::size_t free_count() const;
};

struct OccupancyOptions {
  double margin = 0.5;  // meters of free border around the footprint union
};

/// Builds the grid from every node that has a Box3D: a cell is occupied iff
/// its interior intersects the ground-plane (x-z) projection of some box.
/// Throws when the scene has no 3D geometry.
OccupancyGrid build_occupancy(const scene::SceneGraph& scene, double cell_size,
                              const OccupancyOptions& options = {});

enum class PlacementDirection { Left, Right, Front, Behind };

std::optional<PlacementDirection> placement_direction_from_tag(scene::ConceptTag tag);
const std::string& placement_direction_name(PlacementDirection direction);

struct PlacementPoint {
  Vec3 world;  // camera frame, meters
  std::optional<scene::PixelPoint> pixel;
  int row = 0;
  int col = 0;
};

/// Samples `n` points in free cells whose near edge lies within
/// offset +- cell_size/2 of the anchor footprint boundary along `direction`,
/// laterally overlapping the anchor. Points are cell centers at the anchor's
/// ground height. Deterministic per seed. Throws "no free cell" with a
/// nearest-feasible diagnostic when the band is infeasible.
std::vector<PlacementPoint> sample_placement(const OccupancyGrid& grid, const std::string& anchor,
                                             PlacementDirection direction, double offset,
                                             std::size_t n, std::uint64_t seed);

/// Candidate cells for a placement query, in deterministic (row, col) order.
/// Exposed so callers and tests can scan the feasible band exhaustively.
std::vector<std::pair<int, int>> placement_candidates(const OccupancyGrid& grid,
                                                      const std::string& anchor,
                                                      PlacementDirection direction, double offset);

/// Signed displacement of a cell's near edge from the anchor footprint
/// boundary along the direction (positive = beyond the boundary).
double placement_displacement(const OccupancyGrid& grid, const Footprint& anchor,
                              PlacementDirection direction, int row, int col);

/// '.' free, '#' occupied, '?' unknown; one row per grid row (z increasing).
std::string occupancy_ascii(const OccupancyGrid& grid);

}  // namespace ekit::geom

#endif  // EKIT_GEOM_OCCUPANCY_HPP

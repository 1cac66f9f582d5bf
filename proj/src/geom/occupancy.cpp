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

#include "ekit/geom/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ekit::geom {

using scene::ConceptTag;
using scene::SceneGraph;

namespace {

Vec3 rotate(const scene::Rotation3& r, const Vec3& p) {
  return {r[0][0] * p[0] + r[0][1] * p[1] + r[0][2] * p[2],
          r[1][0] * p[0] + r[1][1] * p[1] + r[1][2] * p[2],
          r[2][0] * p[0] + r[2][1] * p[1] + r[2][2] * p[2]};
}

Vec3 rotate_transpose(const scene::Rotation3& r, const Vec3& p) {
  return {r[0][0] * p[0] + r[1][0] * p[1] + r[2][0] * p[2],
          r[0][1] * p[0] + r[1][1] * p[1] + r[2][1] * p[2],
          r[0][2] * p[0] + r[1][2] * p[1] + r[2][2] * p[2]};
}

Footprint footprint_of(const scene::Box3D& box, const std::optional<scene::Rotation3>& rotation) {
  Footprint fp;
  fp.min_x = std::numeric_limits<double>::infinity();
  fp.min_z = std::numeric_limits<double>::infinity();
  fp.max_x = -std::numeric_limits<double>::infinity();
  fp.max_z = -std::numeric_limits<double>::infinity();
  fp.ground_y = -std::numeric_limits<double>::infinity();
  for (const double x : {box.min_x, box.max_x}) {
    for (const double y : {box.min_y, box.max_y}) {
      for (const double z : {box.min_z, box.max_z}) {
        Vec3 p = {x, y, z};
        if (rotation) p = rotate(*rotation, p);
        fp.min_x = std::min(fp.min_x, p[0]);
        fp.max_x = std::max(fp.max_x, p[0]);
        fp.min_z = std::min(fp.min_z, p[2]);
        fp.max_z = std::max(fp.max_z, p[2]);
        fp.ground_y = std::max(fp.ground_y, p[1]);  // y points down: base = max y
      }
    }
  }
  return fp;
}

double snap_down(double v, double cell) { return std::floor(v / cell) * cell; }

}  // namespace

const std::string* OccupancyGrid::owner_at(int row, int col) const {
  const auto index = owner[static_cast<std::size_t>(row) * cols + col];
  if (index < 0) return nullptr;
  return &object_ids[static_cast<std::size_t>(index)];
}

std::array<double, 4> OccupancyGrid::cell_bounds(int row, int col) const {
  const double x0 = origin_x + col * cell_size;
  const double z0 = origin_z + row * cell_size;
  return {x0, z0, x0 + cell_size, z0 + cell_size};
}

std::optional<std::pair<int, int>> OccupancyGrid::cell_of(double x, double z) const {
  const int col = static_cast<int>(std::floor((x - origin_x) / cell_size));
  const int row = static_cast<int>(std::floor((z - origin_z) / cell_size));
  if (row < 0 || col < 0 || row >= rows || col >= cols) return std::nullopt;
  return std::make_pair(row, col);
}

std::size_t OccupancyGrid::free_count() const {
  return static_cast<std::size_t>(
      std::count(cells.begin(), cells.end(), CellState::Free));
}

OccupancyGrid build_occupancy(const SceneGraph& scene, double cell_size,
                              const OccupancyOptions& options) {
  if (!(cell_size > 0.0)) fail("build_occupancy: cell_size must be positive");

  OccupancyGrid grid;
  grid.cell_size = cell_size;
  grid.gravity_rotation = scene.gravity_rotation;
  if (!scene.frames.empty() && scene.primary_frame().intrinsics) {
    grid.intrinsics = scene.primary_frame().intrinsics;
  }

  double min_x = std::numeric_limits<double>::infinity();
  double min_z = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_z = -std::numeric_limits<double>::infinity();
  for (const auto& node : scene.nodes) {
    if (!node.box3d) continue;
    const auto fp = footprint_of(*node.box3d, scene.gravity_rotation);
    grid.footprints[node.id] = fp;
    min_x = std::min(min_x, fp.min_x);
    max_x = std::max(max_x, fp.max_x);
    min_z = std::min(min_z, fp.min_z);
    max_z = std::max(max_z, fp.max_z);
  }
  if (grid.footprints.empty()) fail("build_occupancy: no 3D geometry in scene");

  grid.origin_x = snap_down(min_x - options.margin, cell_size);
  grid.origin_z = snap_down(min_z - options.margin, cell_size);
  grid.cols = static_cast<int>(std::ceil((max_x + options.margin - grid.origin_x) / cell_size));
  grid.rows = static_cast<int>(std::ceil((max_z + options.margin - grid.origin_z) / cell_size));
  grid.cols = std::max(grid.cols, 1);
  grid.rows = std::max(grid.rows, 1);
  grid.cells.assign(static_cast<std::size_t>(grid.rows) * grid.cols, CellState::Free);
  grid.owner.assign(static_cast<std::size_t>(grid.rows) * grid.cols, -1);

  // strict interior overlap with a tolerance, so footprints that merely touch
  // a cell edge (exactly or within fp rounding of origin + col*cell) stay out
  const double eps = 1e-9 * cell_size;
  for (const auto& [id, fp] : grid.footprints) {
    grid.object_ids.push_back(id);
    const auto object_index = static_cast<std::int32_t>(grid.object_ids.size()) - 1;
    for (int row = 0; row < grid.rows; ++row) {
      for (int col = 0; col < grid.cols; ++col) {
        const auto bounds = grid.cell_bounds(row, col);
        if (bounds[0] < fp.max_x - eps && fp.min_x + eps < bounds[2] &&
            bounds[1] < fp.max_z - eps && fp.min_z + eps < bounds[3]) {
          const auto index = static_cast<std::size_t>(row) * grid.cols + col;
          grid.cells[index] = CellState::Occupied;
          grid.owner[index] = object_index;
        }
      }
    }
  }
  return grid;
}

std::optional<PlacementDirection> placement_direction_from_tag(ConceptTag tag) {
  switch (tag) {
    case ConceptTag::DirLeft:
    case ConceptTag::LeftOf: return PlacementDirection::Left;
    case ConceptTag::DirRight:
    case ConceptTag::RightOf: return PlacementDirection::Right;
    case ConceptTag::DirFront:
    case ConceptTag::InFrontOf: return PlacementDirection::Front;
    case ConceptTag::DirBack:
    case ConceptTag::Behind: return PlacementDirection::Behind;
    default: return std::nullopt;
  }
}

const std::string& placement_direction_name(PlacementDirection direction) {
  static const std::string names[] = {"left", "right", "front", "behind"};
  return names[static_cast<int>(direction)];
}

double placement_displacement(const OccupancyGrid& grid, const Footprint& anchor,
                              PlacementDirection direction, int row, int col) {
  const auto bounds = grid.cell_bounds(row, col);
  switch (direction) {
    case PlacementDirection::Right: return bounds[0] - anchor.max_x;
    case PlacementDirection::Left: return anchor.min_x - bounds[2];
    case PlacementDirection::Behind: return bounds[1] - anchor.max_z;
    case PlacementDirection::Front: return anchor.min_z - bounds[3];
  }
  return 0.0;
}

namespace {

bool lateral_overlap(const OccupancyGrid& grid, const Footprint& anchor,
                     PlacementDirection direction, int row, int col) {
  const auto bounds = grid.cell_bounds(row, col);
  if (direction == PlacementDirection::Left || direction == PlacementDirection::Right) {
    return bounds[1] < anchor.max_z && anchor.min_z < bounds[3];
  }
  return bounds[0] < anchor.max_x && anchor.min_x < bounds[2];
}

const Footprint& anchor_footprint(const OccupancyGrid& grid, const std::string& anchor) {
  const auto it = grid.footprints.find(anchor);
  if (it == grid.footprints.end()) fail("sample_placement: anchor not in grid: " + anchor);
  return it->second;
}

}  // namespace

std::vector<std::pair<int, int>> placement_candidates(const OccupancyGrid& grid,
                                                      const std::string& anchor,
                                                      PlacementDirection direction, double offset) {
  const auto& fp = anchor_footprint(grid, anchor);
  const double half_cell = grid.cell_size / 2.0;
  std::vector<std::pair<int, int>> candidates;
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      if (grid.at(row, col) != CellState::Free) continue;
      if (!lateral_overlap(grid, fp, direction, row, col)) continue;
      const double disp = placement_displacement(grid, fp, direction, row, col);
      if (disp < offset - half_cell || disp > offset + half_cell) continue;
      if (grid.intrinsics) {
        // keep only cells whose center projects inside the image
        const auto bounds = grid.cell_bounds(row, col);
        Vec3 world = {(bounds[0] + bounds[2]) / 2.0, fp.ground_y, (bounds[1] + bounds[3]) / 2.0};
        if (grid.gravity_rotation) world = rotate_transpose(*grid.gravity_rotation, world);
        if (!(world[2] > 0.0)) continue;
        const auto pixel = project(world, *grid.intrinsics);
        if (pixel.x < 0 || pixel.y < 0 || pixel.x > grid.intrinsics->width - 1 ||
            pixel.y > grid.intrinsics->height - 1) {
          continue;
        }
      }
      candidates.emplace_back(row, col);
    }
  }
  return candidates;
}

std::vector<PlacementPoint> sample_placement(const OccupancyGrid& grid, const std::string& anchor,
                                             PlacementDirection direction, double offset,
                                             std::size_t n, std::uint64_t seed) {
  if (offset < 0.0) fail("sample_placement: offset must be >= 0");
  if (n == 0) fail("sample_placement: n must be >= 1");
  const auto& fp = anchor_footprint(grid, anchor);
  auto candidates = placement_candidates(grid, anchor, direction, offset);
  if (candidates.empty()) {
    // nearest-feasible diagnostic: closest free cell displacement to the target band
    double best = std::numeric_limits<double>::infinity();
    bool any_free = false;
    for (int row = 0; row < grid.rows; ++row) {
      for (int col = 0; col < grid.cols; ++col) {
        if (grid.at(row, col) != CellState::Free) continue;
        if (!lateral_overlap(grid, fp, direction, row, col)) continue;
        any_free = true;
        const double disp = placement_displacement(grid, fp, direction, row, col);
        if (std::abs(disp - offset) < std::abs(best - offset)) best = disp;
      }
    }
    std::ostringstream msg;
    msg << "no free cell at offset " << offset << " " << placement_direction_name(direction)
        << " of " << anchor;
    if (any_free) {
      msg << "; nearest feasible displacement is " << best;
    } else {
      msg << "; no free cell in that direction at all";
    }
    fail(msg.str());
  }

  Rng rng(derive_seed(seed, {anchor, placement_direction_name(direction)}));
  std::vector<std::pair<int, int>> chosen;
  if (candidates.size() >= n) {
    const auto indices = rng.sample_without_replacement(candidates.size(), n);
    for (const auto index : indices) chosen.push_back(candidates[index]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      chosen.push_back(candidates[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))]);
    }
  }

  std::vector<PlacementPoint> out;
  out.reserve(chosen.size());
  for (const auto& [row, col] : chosen) {
    const auto bounds = grid.cell_bounds(row, col);
    Vec3 world = {(bounds[0] + bounds[2]) / 2.0, fp.ground_y, (bounds[1] + bounds[3]) / 2.0};
    if (grid.gravity_rotation) world = rotate_transpose(*grid.gravity_rotation, world);
    PlacementPoint point;
    point.world = world;
    point.row = row;
    point.col = col;
    if (grid.intrinsics && world[2] > 0.0) {
      point.pixel = project(world, *grid.intrinsics);
    }
    out.push_back(point);
  }
  return out;
}

std::string occupancy_ascii(const OccupancyGrid& grid) {
  std::ostringstream out;
  for (int row = 0; row < grid.rows; ++row) {
    for (int col = 0; col < grid.cols; ++col) {
      switch (grid.at(row, col)) {
        case CellState::Free: out << '.'; break;
        case CellState::Occupied: out << '#'; break;
        case CellState::Unknown: out << '?'; break;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ekit::geom

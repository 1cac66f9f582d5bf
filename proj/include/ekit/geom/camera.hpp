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

#ifndef EKIT_GEOM_CAMERA_HPP
#define EKIT_GEOM_CAMERA_HPP

#include <array>
#include <optional>
#include <vector>

#include "ekit/scene/types.hpp"

namespace ekit::geom {

using Vec3 = std::array<double, 3>;

/// Object-level point cloud, camera frame, meters.
struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Pinhole back-projection. For each valid pixel (u, v) inside `region`
/// (whole image when absent): X = (u-cx)*d/fx, Y = (v-cy)*d/fy, Z = d.
/// Output order is row-major. Throws on an empty result.
PointCloud backproject(const scene::DepthMap& depth, const scene::CameraIntrinsics& k,
                       const std::optional<scene::Mask2D>& region = std::nullopt);

/// Pinhole projection, the inverse of backproject: u = fx*x/z + cx,
/// v = fy*y/z + cy. Throws when z <= 0.
scene::PixelPoint project(const Vec3& point, const scene::CameraIntrinsics& k);

/// Axis-aligned box fit with symmetric per-tail quantile trimming:
/// ceil(trim_quantile * n) points are dropped from each end of every axis
/// before taking min/max. Axes that collapse to zero extent are padded by a
/// tiny epsilon so the box stays well-formed; a cloud with zero extent on
/// all axes is an error.
scene::Box3D fit_aabb(const PointCloud& cloud, double trim_quantile = 0.02);

}  // namespace ekit::geom

#endif  // EKIT_GEOM_CAMERA_HPP

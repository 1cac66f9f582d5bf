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

#include "ekit/geom/camera.hpp"

#include <algorithm>
#include <cmath>

namespace ekit::geom {

PointCloud backproject(const scene::DepthMap& depth, const scene::CameraIntrinsics& k,
                       const std::optional<scene::Mask2D>& region) {
  if (depth.width != k.width || depth.height != k.height) {
    fail("backproject: depth dimensions do not match intrinsics");
  }
  if (region && (region->width != depth.width || region->height != depth.height)) {
    fail("backproject: region dimensions do not match depth");
  }
  std::vector<std::uint8_t> mask;
  if (region) mask = region->decode();

  PointCloud cloud;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      if (!depth.is_valid(u, v)) continue;
      if (region && !mask[static_cast<std::size_t>(v) * depth.width + u]) continue;
      const double d = depth.at(u, v);
      cloud.points.push_back({(u - k.cx) * d / k.fx, (v - k.cy) * d / k.fy, d});
    }
  }
  if (cloud.empty()) fail("backproject: empty region");
  return cloud;
}

scene::PixelPoint project(const Vec3& point, const scene::CameraIntrinsics& k) {
  if (!(point[2] > 0.0)) fail("project: z must be positive");
  return {k.fx * point[0] / point[2] + k.cx, k.fy * point[1] / point[2] + k.cy};
}

scene::Box3D fit_aabb(const PointCloud& cloud, double trim_quantile) {
  if (cloud.size() < 3) fail("fit_aabb: too few points");
  if (trim_quantile < 0.0 || trim_quantile >= 0.5) {
    fail("fit_aabb: trim_quantile must be in [0, 0.5)");
  }
  const std::size_t n = cloud.size();
  std::size_t drop = trim_quantile > 0.0
                         ? static_cast<std::size_t>(std::ceil(trim_quantile * static_cast<double>(n)))
                         : 0;
  drop = std::min(drop, (n - 1) / 2);

  double bounds[3][2];
  bool degenerate_all = true;
  std::vector<double> axis(n);
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < n; ++i) axis[i] = cloud.points[i][static_cast<std::size_t>(a)];
    std::sort(axis.begin(), axis.end());
    bounds[a][0] = axis[drop];
    bounds[a][1] = axis[n - 1 - drop];
    if (bounds[a][1] > bounds[a][0]) degenerate_all = false;
  }
  if (degenerate_all) fail("fit_aabb: degenerate cloud (zero extent on all axes)");

  constexpr double kPad = 1e-6;  // keeps flat clouds representable as boxes
  scene::Box3D box;
  box.min_x = bounds[0][0];
  box.max_x = std::max(bounds[0][1], bounds[0][0] + kPad);
  box.min_y = bounds[1][0];
  box.max_y = std::max(bounds[1][1], bounds[1][0] + kPad);
  box.min_z = bounds[2][0];
  box.max_z = std::max(bounds[2][1], bounds[2][0] + kPad);
  box.validate("fit_aabb");
  return box;
}

}  // namespace ekit::geom

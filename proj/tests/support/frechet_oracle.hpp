/*
 * Copyright (C) 2026 The EmbodiKit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EKIT_TESTS_SUPPORT_FRECHET_ORACLE_HPP
#define EKIT_TESTS_SUPPORT_FRECHET_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ekit/scene/types.hpp"

namespace ekit::testsupport {

/// Brute-force discrete Frechet: enumerate every monotone coupling
/// recursively and take the minimum over couplings of the maximum pairwise
/// distance. Exponential; fine for |a|, |b| <= 6. Kept deliberately
/// independent of the dynamic-programming implementation it checks.
inline double frechet_bruteforce(const std::vector<scene::PixelPoint>& a,
                                 const std::vector<scene::PixelPoint>& b) {
  const auto dist = [&](std::size_t i, std::size_t j) {
    const double dx = a[i].x - b[j].x;
    const double dy = a[i].y - b[j].y;
    return std::sqrt(dx * dx + dy * dy);
  };
  double best = std::numeric_limits<double>::infinity();
  // walk all monotone paths from (0,0) to (m-1,n-1)
  struct Frame {
    std::size_t i, j;
    double max_so_far;
  };
  std::vector<Frame> stack = {{0, 0, dist(0, 0)}};
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  while (!stack.empty()) {
    const auto [i, j, max_so_far] = stack.back();
    stack.pop_back();
    if (i == m - 1 && j == n - 1) {
      best = std::min(best, max_so_far);
      continue;
    }
    if (i + 1 < m) stack.push_back({i + 1, j, std::max(max_so_far, dist(i + 1, j))});
    if (j + 1 < n) stack.push_back({i, j + 1, std::max(max_so_far, dist(i, j + 1))});
    if (i + 1 < m && j + 1 < n) {
      stack.push_back({i + 1, j + 1, std::max(max_so_far, dist(i + 1, j + 1))});
    }
  }
  return best;
}

}  // namespace ekit::testsupport

#endif  // EKIT_TESTS_SUPPORT_FRECHET_ORACLE_HPP

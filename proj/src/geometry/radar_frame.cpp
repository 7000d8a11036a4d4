// Copyright 2026, The radar-moseve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moseve/geometry/radar_frame.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "moseve/errors.hpp"

namespace moseve::geom {

double squared_distance(const RadarPoint& a, const RadarPoint& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}


bool canonical_less(const RadarPoint& a, const RadarPoint& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  if (a.z != b.z) return a.z < b.z;
  return a.v < b.v;
}

void RadarFrame::validate() const {
  if (labels && labels->size() != points.size()) {
    throw ContractError("frame has " + std::to_string(labels->size()) + " labels for " +
                        std::to_string(points.size()) + " points");
  }
  if (timestamp < 0.0) throw ContractError("frame timestamp is negative");
}

std::vector<std::size_t> canonical_ranks(Cloud cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return canonical_less(cloud[a], cloud[b]); });
  std::vector<std::size_t> rank(cloud.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

}  // namespace moseve::geom

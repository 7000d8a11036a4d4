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

#pragma once

#include <cstddef>
#include <vector>

#include "moseve/geometry/radar_frame.hpp"

namespace moseve::geom {

/// Radial component of a forward ego speed seen at `p`: ego_v * y / |p|.
double radial_projection(double ego_v, const RadarPoint& p);

struct CompensatedFrame {
  RadarFrame frame;
  /// Source index of each kept point.
  std::vector<std::size_t> kept;
  /// Points on the z axis (x = y = 0), which have no planar direction.
  std::size_t dropped = 0;
};

/// Replaces each radial velocity with
///   v' = est_v * y / r_xy - v * r / r_xy
/// so that static returns read zero when est_v is the true ego speed.
CompensatedFrame velocity_compensate(double est_v, const RadarFrame& frame);

}  // namespace moseve::geom

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

#include "moseve/geometry/velocity.hpp"

#include "moseve/errors.hpp"

namespace moseve::geom {

double radial_projection(double ego_v, const RadarPoint& p) {
  const double r = p.range();
  if (!(r > 0.0)) throw ArgumentError("radial_projection: point at the sensor origin");
  return ego_v * p.y / r;
}

CompensatedFrame velocity_compensate(double est_v, const RadarFrame& frame) {
  frame.validate();
  CompensatedFrame out;
  out.frame.timestamp = frame.timestamp;
  out.frame.ego_v = frame.ego_v;
  out.frame.points.reserve(frame.size());
  std::vector<Motion> labels;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    RadarPoint p = frame.points[i];
    const double rxy = p.planar_range();
    if (!(rxy > 0.0)) {
      ++out.dropped;
      continue;
    }
    p.v = est_v * p.y / rxy - p.v * p.range() / rxy;
    out.frame.points.push_back(p);
    out.kept.push_back(i);
    if (frame.labels) labels.push_back((*frame.labels)[i]);
  }
  if (frame.labels) out.frame.labels = std::move(labels);
  return out;
}

}  // namespace moseve::geom

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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace moseve::geom {

/// One 4D radar return. Coordinates in meters in the sensor frame (+y
/// forward); `v` is the measured radial velocity in m/s, positive for a
/// static point ahead of a forward-moving sensor.
struct RadarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double v = 0.0;

  double range() const { return std::sqrt(x * x + y * y + z * z); }
  double planar_range() const { return std::sqrt(x * x + y * y); }
  friend bool operator==(const RadarPoint&, const RadarPoint&) = default;
};

enum class Motion : std::uint8_t { kStatic = 0, kMoving = 1 };

using Cloud = std::span<const RadarPoint>;

struct RadarFrame {
  std::vector<RadarPoint> points;
  double timestamp = 0.0;
  std::optional<double> ego_v;
  std::optional<std::vector<Motion>> labels;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  Cloud cloud() const { return points; }
  /// Throws ContractError when label count or timestamp is inconsistent.
  void validate() const;

  friend bool operator==(const RadarFrame&, const RadarFrame&) = default;
};

enum class NeighborSource : std::uint8_t { kSameFrame, kPreviousFrame };

struct NeighborSet {
  static constexpr std::size_t kExternalQuery = std::numeric_limits<std::size_t>::max();

  std::size_t query = kExternalQuery;
  std::vector<std::size_t> indices;
  NeighborSource source = NeighborSource::kSameFrame;
};

double squared_distance(const RadarPoint& a, const RadarPoint& b);

/// Lexicographic order on (x, y, z, v).
bool canonical_less(const RadarPoint& a, const RadarPoint& b);

/// Position of each point in the canonical order (ties by index). Ranks
/// survive reordering and rigid translation of a cloud, so they key per-point
/// random streams.
std::vector<std::size_t> canonical_ranks(Cloud cloud);

}  // namespace moseve::geom

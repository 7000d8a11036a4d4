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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "moseve/geometry/radar_frame.hpp"
#include "moseve/kv.hpp"
#include "moseve/rng.hpp"

namespace moseve::sim {

using Vec3 = std::array<double, 3>;

struct SceneConfig {
  /// Background scatterers, spread over the region the sensor sweeps.
  std::size_t static_count = 200;
  /// Parked clusters: rigid groups that never move.
  std::size_t static_object_count = 2;
  std::size_t moving_count = 4;
  std::size_t object_scatterers_min = 5;
  std::size_t object_scatterers_max = 30;
  double object_extent = 1.5;
  double object_speed_min = 2.0;
  double object_speed_max = 8.0;
  /// Explicit per-frame ego speed; when empty a piecewise-constant profile is
  /// drawn from [ego_speed_min, ego_speed_max] with one value per segment.
  std::vector<double> ego_profile;
  double ego_speed_min = 2.0;
  double ego_speed_max = 12.0;
  std::size_t ego_segment_frames = 10;
  /// Field of view in sensor coordinates.
  double fov_x = 30.0;
  double fov_y_min = 2.0;
  double fov_y_max = 50.0;
  double fov_z_min = -1.0;
  double fov_z_max = 3.0;
  double velocity_noise = 0.1;
  double position_noise = 0.0;
  double dropout = 0.1;
  std::size_t frames = 20;
  double frame_rate = 10.0;
  std::uint64_t seed = 0;

  /// Throws ValidationError for negative noise, dropout outside [0, 1) and
  /// empty ranges.
  void validate() const;
  void to_kv(KeyValues& kv, const std::string& prefix = "scene.") const;
  static SceneConfig from_kv(const KeyValues& kv, const std::string& prefix = "scene.");
  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct ObjectTrack {
  std::size_t id = 0;
  geom::Motion kind = geom::Motion::kStatic;
  /// Bounding radius of the scatterer cluster in meters (0 for the background).
  double extent = 0.0;
  /// World position and velocity per frame.
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  friend bool operator==(const ObjectTrack&, const ObjectTrack&) = default;
};

struct LabeledSequence {
  std::string name;
  std::vector<geom::RadarFrame> frames;
  std::vector<ObjectTrack> tracks;
  SceneConfig config;
  friend bool operator==(const LabeledSequence&, const LabeledSequence&) = default;
};

/// Radial velocity seen at sensor-frame position `p` for a scatterer moving
/// with `object_v` while the sensor moves with `ego_v`:
///   (ego_v - object_v) . p / |p| + N(0, sigma).
double measure_point(const Vec3& ego_v, const Vec3& object_v, const Vec3& p, double sigma, Rng& rng);

/// Per-frame ego speed for a config (explicit profile or the seeded draw).
std::vector<double> ego_speed_profile(const SceneConfig& config);

/// Ego drives along +y in a world frame whose origin is the sensor pose at
/// frame 0. Every frame lists the surviving returns inside the field of view,
/// in shuffled order, labeled with the class of their track.
LabeledSequence simulate_sequence(const SceneConfig& config);

}  // namespace moseve::sim

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
#include <vector>

#include "moseve/geometry/radar_frame.hpp"

namespace moseve::base {

struct RansacConfig {
  int iterations = 100;
  /// Inlier band on the radial residual, m/s.
  double threshold = 0.3;
  /// Minimum fraction of usable points that must agree with the consensus.
  double min_inlier_ratio = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RansacResult {
  double velocity = 0.0;
  std::size_t inliers = 0;
  /// Points with a non-zero range.
  std::size_t usable = 0;
};

/// Single-point hypotheses v = v_i |p_i| / y_i drawn from well-conditioned
/// points (|y|/|p| >= 0.1) in canonical order, scored by inlier count, then
/// refit by least squares on the consensus set. Throws DegenerateSceneError
/// when no hypothesis reaches the minimum inlier ratio.
RansacResult ransac_eve_detailed(const geom::RadarFrame& frame, const RansacConfig& config);
double ransac_eve(const geom::RadarFrame& frame, const RansacConfig& config);

/// Least-squares ego speed over every point with a non-zero range. Throws
/// DegenerateSceneError when no point constrains it.
double least_squares_eve(const geom::RadarFrame& frame);

struct IcpConfig {
  int max_iterations = 50;
  /// Stop when the translation update is shorter than this, m.
  double tolerance = 1e-6;
  /// Correspondences farther apart than this are ignored, m.
  double max_correspondence = 5.0;

  void validate() const;
};

struct IcpResult {
  double velocity = 0.0;
  /// Translation that maps frame_t onto frame_prev.
  std::array<double, 3> translation{};
  int iterations = 0;
  bool converged = false;
  std::size_t correspondences = 0;
};

/// Translation-only point-to-point ICP. The returned velocity is t_y / dt:
/// a sensor moving forward sees the scene shift towards it, so the
/// translation taking the current frame back onto the previous one points
/// along +y.
IcpResult icp_velocity(const geom::RadarFrame& frame_prev, const geom::RadarFrame& frame_t, double dt,
                       const IcpConfig& config);

/// Moving iff |v'| > tau on a compensated frame.
std::vector<geom::Motion> threshold_mos(const geom::RadarFrame& compensated, double tau);

inline constexpr double kDefaultMosThreshold = 0.25;

}  // namespace moseve::base

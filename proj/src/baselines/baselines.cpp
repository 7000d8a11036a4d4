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

#include "moseve/baselines/baselines.hpp"

#include <cmath>
#include <limits>

#include "moseve/errors.hpp"
#include "moseve/rng.hpp"

namespace moseve::base {

void RansacConfig::validate() const {
  if (iterations < 1) throw ValidationError("ransac: iterations must be at least 1");
  if (!(threshold > 0.0)) throw ValidationError("ransac: threshold must be positive");
  if (!(min_inlier_ratio > 0.0 && min_inlier_ratio <= 1.0)) {
    throw ValidationError("ransac: minimum inlier ratio must lie in (0, 1]");
  }
}

void IcpConfig::validate() const {
  if (max_iterations < 1) throw ValidationError("icp: max iterations must be at least 1");
  if (!(tolerance > 0.0) || !(max_correspondence > 0.0)) {
    throw ValidationError("icp: tolerance and correspondence distance must be positive");
  }
}

namespace {

struct Radial {
  double u;  // y / |p|
  double v;
};

std::size_t count_inliers(const std::vector<Radial>& obs, double velocity, double threshold) {
  std::size_t n = 0;
  for (const auto& o : obs) n += std::abs(velocity * o.u - o.v) < threshold;
  return n;
}

// Least squares over the inliers of `velocity`.
double refit(const std::vector<Radial>& obs, double velocity, double threshold) {
  double num = 0.0, den = 0.0;
  for (const auto& o : obs) {
    if (std::abs(velocity * o.u - o.v) < threshold) {
      num += o.u * o.v;
      den += o.u * o.u;
    }
  }
  return den > 0.0 ? num / den : velocity;
}

}  // namespace

RansacResult ransac_eve_detailed(const geom::RadarFrame& frame, const RansacConfig& config) {
  config.validate();
  // Canonical order makes the hypotheses independent of storage order.
  const auto ranks = geom::canonical_ranks(frame.cloud());
  std::vector<std::size_t> order(frame.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) order[ranks[i]] = i;

  std::vector<Radial> obs;
  std::vector<Radial> candidates;
  for (std::size_t i : order) {
    const auto& p = frame.points[i];
    const double r = p.range();
    if (!(r > 0.0)) continue;
    obs.push_back({p.y / r, p.v});
    if (std::abs(p.y) / r >= 0.1) candidates.push_back(obs.back());
  }
  if (candidates.empty()) throw DegenerateSceneError("ransac_eve: no well-conditioned point in the frame");

  Rng rng(config.seed);
  double best_v = 0.0;
  std::size_t best = 0;
  for (int it = 0; it < config.iterations; ++it) {
    const auto& c = candidates[uniform_index(rng, candidates.size())];
    const double v = c.v / c.u;
    const std::size_t n = count_inliers(obs, v, config.threshold);
    if (n > best) {
      best = n;
      best_v = v;
    }
  }
  const double min_inliers = config.min_inlier_ratio * static_cast<double>(obs.size());
  if (static_cast<double>(best) < min_inliers) {
    throw DegenerateSceneError("ransac_eve: best consensus has " + std::to_string(best) + " of " +
                               std::to_string(obs.size()) + " points");
  }

  RansacResult out;
  out.usable = obs.size();
  out.velocity = best_v;
  for (int pass = 0; pass < 3; ++pass) out.velocity = refit(obs, out.velocity, config.threshold);
  out.inliers = count_inliers(obs, out.velocity, config.threshold);
  return out;
}

double ransac_eve(const geom::RadarFrame& frame, const RansacConfig& config) {
  return ransac_eve_detailed(frame, config).velocity;
}

double least_squares_eve(const geom::RadarFrame& frame) {
  double num = 0.0, den = 0.0;
  for (const auto& p : frame.points) {
    const double r = p.range();
    if (!(r > 0.0)) continue;
    num += p.y / r * p.v;
    den += p.y * p.y / (r * r);
  }
  if (!(den > 0.0)) throw DegenerateSceneError("least_squares_eve: no point constrains the ego speed");
  return num / den;
}

IcpResult icp_velocity(const geom::RadarFrame& frame_prev, const geom::RadarFrame& frame_t, double dt,
                       const IcpConfig& config) {
  config.validate();
  if (!(dt > 0.0)) throw ArgumentError("icp_velocity: dt must be positive");
  if (frame_prev.size() < 3 || frame_t.size() < 3) throw ArgumentError("icp_velocity: frames need 3 points each");

  IcpResult out;
  const double max_d2 = config.max_correspondence * config.max_correspondence;
  std::array<double, 3> t{};
  for (out.iterations = 1; out.iterations <= config.max_iterations; ++out.iterations) {
    std::array<double, 3> acc{};
    std::size_t matched = 0;
    for (const auto& q : frame_t.points) {
      const geom::RadarPoint moved{q.x + t[0], q.y + t[1], q.z + t[2], 0.0};
      double best = std::numeric_limits<double>::infinity();
      const geom::RadarPoint* nearest = nullptr;
      for (const auto& p : frame_prev.points) {
        const double d2 = geom::squared_distance(moved, p);
        if (d2 < best) {
          best = d2;
          nearest = &p;
        }
      }
      if (best <= max_d2) {
        acc[0] += nearest->x - q.x;
        acc[1] += nearest->y - q.y;
        acc[2] += nearest->z - q.z;
        ++matched;
      }
    }
    out.correspondences = matched;
    if (matched == 0) break;
    const std::array<double, 3> next{acc[0] / matched, acc[1] / matched, acc[2] / matched};
    const double step = std::sqrt((next[0] - t[0]) * (next[0] - t[0]) + (next[1] - t[1]) * (next[1] - t[1]) +
                                  (next[2] - t[2]) * (next[2] - t[2]));
    t = next;
    if (step < config.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, config.max_iterations);
  out.translation = t;
  out.velocity = t[1] / dt;
  return out;
}

std::vector<geom::Motion> threshold_mos(const geom::RadarFrame& compensated, double tau) {
  std::vector<geom::Motion> out(compensated.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::abs(compensated.points[i].v) > tau ? geom::Motion::kMoving : geom::Motion::kStatic;
  }
  return out;
}

}  // namespace moseve::base

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

#include <doctest.h>

#include <algorithm>

#include "moseve/baselines/baselines.hpp"
#include "moseve/errors.hpp"
#include "moseve/geometry/velocity.hpp"
#include "moseve/sim/scene.hpp"
#include "support.hpp"
#include "support_net.hpp"

using namespace moseve;
using geom::Motion;
using geom::RadarFrame;

namespace {

RadarFrame static_scene(std::mt19937_64& rng, std::size_t n, double ego) {
  RadarFrame f;
  std::uniform_real_distribution<double> x(-20, 20), y(1, 40), z(-1, 3);
  for (std::size_t i = 0; i < n; ++i) {
    geom::RadarPoint p{x(rng), y(rng), z(rng), 0};
    p.v = ego * p.y / p.range();
    f.points.push_back(p);
  }
  f.labels = std::vector<Motion>(n, Motion::kStatic);
  f.ego_v = ego;
  return f;
}

}  // namespace

TEST_CASE("RANSAC is exact on noiseless static scenes") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double ego = std::uniform_real_distribution<double>(-5, 15)(rng);
    const auto f = static_scene(rng, 30 + rng() % 100, ego);
    base::RansacConfig c;
    c.seed = rng();
    CHECK(std::abs(base::ransac_eve(f, c) - ego) < 1e-9);
    CHECK(std::abs(base::least_squares_eve(f) - ego) < 1e-9);
  }
}

TEST_CASE("RANSAC ignores movers and is permutation invariant") {
  std::mt19937_64 rng(2);
  auto f = static_scene(rng, 80, 8.0);
  // Oncoming movers straight ahead: residual well above the inlier band.
  for (int i = 0; i < 30; ++i) {
    geom::RadarPoint p{0.1 * i, 15.0 + i, 0.0, 0};
    p.v = (8.0 + 6.0) * p.y / p.range();
    f.points.push_back(p);
    f.labels->push_back(Motion::kMoving);
  }
  base::RansacConfig c;
  c.seed = 4;
  const auto r = base::ransac_eve_detailed(f, c);
  CHECK(std::abs(r.velocity - 8.0) < 1e-9);
  CHECK(r.inliers == 80);
  CHECK(r.usable == 110);

  auto shuffled = f;
  std::shuffle(shuffled.points.begin(), shuffled.points.end(), rng);
  CHECK(base::ransac_eve(shuffled, c) == r.velocity);
}

TEST_CASE("RANSAC reports degenerate scenes") {
  RadarFrame f;
  f.points = {{10, 0.01, 0, 1.0}, {0, 0, 0, 2.0}};
  base::RansacConfig c;
  CHECK_THROWS_AS(base::ransac_eve(f, c), DegenerateSceneError);
  RadarFrame empty;
  CHECK_THROWS_AS(base::least_squares_eve(empty), DegenerateSceneError);
  c.iterations = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("ICP recovers an exact translation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto prev = static_scene(rng, 150, 0.0);
    const double dy = std::uniform_real_distribution<double>(0.1, 1.2)(rng);
    const double dt = 0.1;
    RadarFrame cur = prev;
    for (auto& p : cur.points) p.y -= dy;
    base::IcpConfig c;
    c.tolerance = 1e-9;
    const auto r = base::icp_velocity(prev, cur, dt, c);
    CHECK(r.converged);
    CHECK(std::abs(r.translation[1] - dy) < 1e-6);
    CHECK(std::abs(r.translation[0]) < 1e-6);
    CHECK(std::abs(r.velocity - dy / dt) < 1e-5);
  }
}

TEST_CASE("ICP validates its inputs") {
  RadarFrame a;
  a.points = {{0, 1, 0, 0}};
  CHECK_THROWS(base::icp_velocity(a, a, 0.0, {}));
  base::IcpConfig c;
  c.max_correspondence = -1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("threshold MOS uses a strict inequality") {
  RadarFrame f;
  f.points = {{0, 1, 0, 0.0}, {0, 1, 0, 1.0}, {0, 1, 0, 0.25}, {0, 1, 0, -0.3}};
  CHECK(base::threshold_mos(f, 0.25) ==
        std::vector<Motion>{Motion::kStatic, Motion::kMoving, Motion::kStatic, Motion::kMoving});
}

TEST_CASE("threshold MOS is exact on noiseless compensated scenes") {
  auto config = test::small_scene(8);
  config.velocity_noise = 0.0;
  config.moving_count = 4;
  const auto seq = sim::simulate_sequence(config);
  for (const auto& f : seq.frames) {
    const auto comp = geom::velocity_compensate(*f.ego_v, f);
    double min_mover = 1e300;
    for (std::size_t i = 0; i < comp.frame.size(); ++i) {
      if ((*comp.frame.labels)[i] == Motion::kMoving) min_mover = std::min(min_mover, std::abs(comp.frame.points[i].v));
    }
    if (min_mover == 1e300 || min_mover < 1e-6) continue;
    CHECK(base::threshold_mos(comp.frame, min_mover / 2) == *comp.frame.labels);
  }
}

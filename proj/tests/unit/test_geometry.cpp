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
#include <numeric>
#include <set>

#include "moseve/errors.hpp"
#include "moseve/geometry/sampling.hpp"
#include "moseve/geometry/velocity.hpp"
#include "support.hpp"

using namespace moseve;
using geom::RadarPoint;

namespace {

// Sort oracle: indices ordered by (distance, index).
std::vector<std::size_t> sorted_by_distance(const RadarPoint& q, const std::vector<RadarPoint>& cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return geom::squared_distance(q, cloud[a]) < geom::squared_distance(q, cloud[b]);
  });
  return order;
}

double min_pairwise(const std::vector<RadarPoint>& cloud, const std::vector<std::size_t>& subset) {
  double best = 1e300;
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      best = std::min(best, std::sqrt(geom::squared_distance(cloud[subset[i]], cloud[subset[j]])));
  return best;
}

}  // namespace

TEST_CASE("knn equals the sort oracle on random instances") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 60);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cloud = test::random_cloud(rng, static_cast<std::size_t>(size(rng)));
    const RadarPoint q = test::random_cloud(rng, 1)[0];
    const auto oracle = sorted_by_distance(q, cloud);
    const auto got = geom::knn(q, cloud, 16);
    REQUIRE(got.indices.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) CHECK(got.indices[i] == oracle[i % oracle.size()]);
  }
}

TEST_CASE("knn breaks distance ties by lower index") {
  const std::vector<RadarPoint> cloud{{1, 0, 0, 0}, {-1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 5, 0}};
  const auto got = geom::knn({0, 0, 0, 0}, cloud, 3);
  CHECK(got.indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("each FPS pick is the farthest remaining point") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cloud = test::random_cloud(rng, 32);
    const auto picks = geom::farthest_point_sample(cloud, 8, rng());
    REQUIRE(picks.size() == 8);
    CHECK(std::set<std::size_t>(picks.begin(), picks.end()).size() == 8);
    for (std::size_t s = 1; s < picks.size(); ++s) {
      auto dist_to_set = [&](std::size_t i) {
        double d = 1e300;
        for (std::size_t t = 0; t < s; ++t) d = std::min(d, geom::squared_distance(cloud[i], cloud[picks[t]]));
        return d;
      };
      double best = -1.0;
      for (std::size_t i = 0; i < cloud.size(); ++i) best = std::max(best, dist_to_set(i));
      CHECK(dist_to_set(picks[s]) == best);
    }
  }
}

TEST_CASE("FPS spread is within the greedy factor of 2 of any random subset") {
  // Greedy max-min selection is a 2-approximation of the optimal spread, so no
  // subset of the same size can have more than twice its minimum separation.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cloud = test::random_cloud(rng, 32);
    const auto picks = geom::farthest_point_sample(cloud, 8, rng());
    const double fps = min_pairwise(cloud, picks);
    std::vector<std::size_t> all(32);
    std::iota(all.begin(), all.end(), 0);
    int beaten = 0;
    for (int s = 0; s < 1000; ++s) {
      std::shuffle(all.begin(), all.end(), rng);
      const std::vector<std::size_t> subset(all.begin(), all.begin() + 8);
      const double other = min_pairwise(cloud, subset);
      CHECK(2.0 * fps >= other);
      beaten += other <= fps;
    }
    CHECK(beaten > 900);
  }
}

TEST_CASE("FPS does not depend on storage order") {
  std::mt19937_64 rng(14);
  auto cloud = test::random_cloud(rng, 40);
  const auto a = geom::farthest_point_sample(cloud, 10, 77);
  std::vector<std::size_t> perm(cloud.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<RadarPoint> shuffled(cloud.size());
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = cloud[perm[i]];
  const auto b = geom::farthest_point_sample(shuffled, 10, 77);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(cloud[a[i]] == shuffled[b[i]]);
}

TEST_CASE("ball query returns exactly K indices inside the ball") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cloud = test::random_cloud(rng, 1 + rng() % 80);
    const std::size_t qi = rng() % cloud.size();
    const double radius = 0.5 + 6.0 * static_cast<double>(rng() % 1000) / 1000.0;
    const auto got = geom::ball_query_sample(cloud[qi], cloud, radius, 16, rng(), qi);
    REQUIRE(got.indices.size() == 16);
    std::size_t inside = 0;
    for (const auto& p : cloud) inside += geom::squared_distance(p, cloud[qi]) <= radius * radius;
    for (auto i : got.indices) {
      REQUIRE(i < cloud.size());
      CHECK(geom::squared_distance(cloud[i], cloud[qi]) <= radius * radius);
    }
    // Every in-ball point appears when the ball holds fewer than K.
    const std::set<std::size_t> distinct(got.indices.begin(), got.indices.end());
    CHECK(distinct.size() == std::min<std::size_t>(inside, 16));
  }
}

TEST_CASE("ball query on an empty ball is an error, the fallback is knn") {
  const std::vector<RadarPoint> cloud{{10, 0, 0, 0}, {20, 0, 0, 0}};
  CHECK_THROWS_AS(geom::ball_query_sample({0, 0, 0, 0}, cloud, 1.0, 4, 1), ContractError);
  const auto got = geom::ball_query_or_nearest({0, 0, 0, 0}, cloud, 1.0, 4, 1);
  CHECK(got.indices == geom::knn({0, 0, 0, 0}, cloud, 4).indices);
}

TEST_CASE("interval sample takes ranks 0, g, 2g, ... of the sort oracle") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cloud = test::random_cloud(rng, 1 + rng() % 70);
    const std::size_t qi = rng() % cloud.size();
    const auto oracle = sorted_by_distance(cloud[qi], cloud);
    const auto got = geom::interval_sample(cloud[qi], cloud, 2, 16, qi);
    REQUIRE(got.indices.size() == 16);
    for (std::size_t j = 0; j < 16; ++j) CHECK(got.indices[j] == oracle[(2 * j) % cloud.size()]);
    CHECK(got.indices[0] == qi);
  }
}

TEST_CASE("canonical ranks follow points through a permutation") {
  std::mt19937_64 rng(17);
  const auto cloud = test::random_cloud(rng, 25);
  const auto ranks = geom::canonical_ranks(cloud);
  std::vector<std::size_t> perm(cloud.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<RadarPoint> shuffled(cloud.size());
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = cloud[perm[i]];
  const auto ranks2 = geom::canonical_ranks(shuffled);
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(ranks2[i] == ranks[perm[i]]);
}

TEST_CASE("random subsample keeps labels attached") {
  std::mt19937_64 rng(18);
  geom::RadarFrame f;
  f.points = test::random_cloud(rng, 50);
  std::vector<geom::Motion> labels;
  for (std::size_t i = 0; i < 50; ++i) labels.push_back(i % 3 ? geom::Motion::kStatic : geom::Motion::kMoving);
  f.labels = labels;
  const auto small = geom::random_subsample(f, 20, 5);
  CHECK(small.size() == 20);
  std::set<std::size_t> sources;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto it = std::find(f.points.begin(), f.points.end(), small.points[i]);
    REQUIRE(it != f.points.end());
    const auto src = static_cast<std::size_t>(it - f.points.begin());
    sources.insert(src);
    CHECK((*small.labels)[i] == labels[src]);
  }
  CHECK(sources.size() == 20);
  CHECK(geom::random_subsample(f, 80, 5).size() == 80);
  CHECK(geom::random_subsample(f, 20, 5) == small);
}

TEST_CASE("radial projection and compensation are consistent") {
  std::mt19937_64 rng(19);
  const double ego = 7.25;
  geom::RadarFrame f;
  for (auto p : test::random_cloud(rng, 100)) {
    p.v = ego * p.y / p.range();
    CHECK(p.v == geom::radial_projection(ego, p));
    f.points.push_back(p);
  }
  const auto c = geom::velocity_compensate(ego, f);
  CHECK(c.dropped == 0);
  for (const auto& p : c.frame.points) CHECK(std::abs(p.v) < 1e-12);

  // A static point straight ahead reads +ego.
  CHECK(geom::radial_projection(ego, {0, 10, 0, 0}) == ego);
}

TEST_CASE("compensation hand example and dropped z-axis points") {
  geom::RadarFrame f;
  f.points = {{3, 4, 0, 1.0}, {0, 0, 2, 5.0}};
  const auto c = geom::velocity_compensate(2.0, f);
  CHECK(c.dropped == 1);
  CHECK(c.kept == std::vector<std::size_t>{0});
  // est*y/r_xy - v*r/r_xy = 2*4/5 - 1*5/5
  CHECK(c.frame.points[0].v == doctest::Approx(0.6).epsilon(1e-15));
}

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

#include "moseve/geometry/sampling.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "moseve/errors.hpp"
#include "moseve/rng.hpp"

namespace moseve::geom {

std::vector<std::size_t> farthest_point_sample(Cloud cloud, std::size_t count, std::uint64_t seed) {
  const std::size_t n = cloud.size();
  if (count == 0) throw ArgumentError("farthest_point_sample: count must be positive");
  if (count > n) {
    throw ArgumentError("farthest_point_sample: count " + std::to_string(count) + " exceeds " + std::to_string(n) +
                        " points");
  }
  Rng rng(seed);
  const std::size_t start_rank = uniform_index(rng, n);
  const auto ranks = canonical_ranks(cloud);
  const std::size_t start =
      static_cast<std::size_t>(std::find(ranks.begin(), ranks.end(), start_rank) - ranks.begin());

  std::vector<std::size_t> selected{start};
  selected.reserve(count);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(n, false);
  taken[start] = true;
  std::size_t last = start;
  while (selected.size() < count) {
    std::size_t next = n;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      nearest[i] = std::min(nearest[i], squared_distance(cloud[i], cloud[last]));
      if (nearest[i] > far) {
        far = nearest[i];
        next = i;
      }
    }
    taken[next] = true;
    selected.push_back(next);
    last = next;
  }
  return selected;
}

namespace {

std::vector<std::size_t> distance_order(const RadarPoint& query, Cloud cloud) {
  std::vector<double> d(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) d[i] = squared_distance(query, cloud[i]);
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  return order;
}

}  // namespace

NeighborSet knn(const RadarPoint& query, Cloud cloud, int k, std::size_t query_index, NeighborSource source) {
  if (k <= 0) throw ArgumentError("knn: k must be positive");
  if (cloud.empty()) throw ArgumentError("knn: empty cloud");
  const std::size_t kk = static_cast<std::size_t>(k);
  NeighborSet out{query_index, {}, source};
  out.indices.reserve(kk);
  if (kk < cloud.size()) {
    std::vector<double> d(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) d[i] = squared_distance(query, cloud[i]);
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto cmp = [&](std::size_t a, std::size_t b) { return d[a] < d[b] || (d[a] == d[b] && a < b); };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(), cmp);
    out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk));
    return out;
  }
  const auto order = distance_order(query, cloud);
  for (std::size_t r = 0; r < kk; ++r) out.indices.push_back(order[r % order.size()]);
  return out;
}

NeighborSet ball_query_sample(const RadarPoint& query, Cloud cloud, double radius, int k, std::uint64_t seed,
                              std::size_t query_index, NeighborSource source) {
  if (!(radius > 0.0)) throw ArgumentError("ball_query_sample: radius must be positive");
  if (k <= 0) throw ArgumentError("ball_query_sample: k must be positive");
  const double r2 = radius * radius;
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double di = squared_distance(query, cloud[i]);
    if (di <= r2) inside.push_back(i);
  }
  if (inside.empty()) throw ContractError("ball_query_sample: no points within radius of the query");

  // Candidates in a storage-order-independent order before drawing.
  std::sort(inside.begin(), inside.end(), [&](std::size_t a, std::size_t b) {
    const double da = squared_distance(query, cloud[a]), db = squared_distance(query, cloud[b]);
    if (da != db) return da < db;
    if (cloud[a] != cloud[b]) return canonical_less(cloud[a], cloud[b]);
    return a < b;
  });

  Rng rng(seed);
  const std::size_t kk = static_cast<std::size_t>(k);
  NeighborSet out{query_index, {}, source};
  out.indices.reserve(kk);
  if (inside.size() >= kk) {
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < kk; ++i) {
      const std::size_t j = i + uniform_index(rng, inside.size() - i);
      std::swap(inside[i], inside[j]);
      out.indices.push_back(inside[i]);
    }
  } else {
    out.indices = inside;
    while (out.indices.size() < kk) out.indices.push_back(inside[uniform_index(rng, inside.size())]);
  }
  return out;
}

NeighborSet ball_query_or_nearest(const RadarPoint& query, Cloud cloud, double radius, int k, std::uint64_t seed,
                                  NeighborSource source) {
  if (cloud.empty()) throw ArgumentError("ball_query_or_nearest: empty cloud");
  if (!(radius > 0.0)) throw ArgumentError("ball_query_or_nearest: radius must be positive");
  const double r2 = radius * radius;
  const bool any = std::any_of(cloud.begin(), cloud.end(),
                               [&](const RadarPoint& p) { return squared_distance(query, p) <= r2; });
  if (!any) return knn(query, cloud, k, NeighborSet::kExternalQuery, source);
  return ball_query_sample(query, cloud, radius, k, seed, NeighborSet::kExternalQuery, source);
}

NeighborSet interval_sample(const RadarPoint& query, Cloud cloud, int stride, int k, std::size_t query_index) {
  if (stride < 1) throw ArgumentError("interval_sample: stride must be at least 1");
  if (k < 1) throw ArgumentError("interval_sample: k must be at least 1");
  if (cloud.empty()) throw ArgumentError("interval_sample: empty cloud");
  const auto order = distance_order(query, cloud);
  NeighborSet out{query_index, {}, NeighborSource::kSameFrame};
  out.indices.reserve(static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < static_cast<std::size_t>(k); ++r) {
    out.indices.push_back(order[(r * static_cast<std::size_t>(stride)) % order.size()]);
  }
  return out;
}

RadarFrame random_subsample(const RadarFrame& frame, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ArgumentError("random_subsample: count must be positive");
  if (frame.empty()) throw ArgumentError("random_subsample: empty frame");
  frame.validate();
  const std::size_t n = frame.size();
  Rng rng(seed);
  std::vector<std::size_t> pick;
  pick.reserve(count);
  if (n >= count) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(all[i], all[i + uniform_index(rng, n - i)]);
      pick.push_back(all[i]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) pick.push_back(uniform_index(rng, n));
  }
  RadarFrame out;
  out.timestamp = frame.timestamp;
  out.ego_v = frame.ego_v;
  out.points.reserve(count);
  for (auto i : pick) out.points.push_back(frame.points[i]);
  if (frame.labels) {
    std::vector<Motion> labels;
    labels.reserve(count);
    for (auto i : pick) labels.push_back((*frame.labels)[i]);
    out.labels = std::move(labels);
  }
  return out;
}

}  // namespace moseve::geom

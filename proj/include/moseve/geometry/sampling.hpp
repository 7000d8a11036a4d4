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
#include <cstdint>
#include <vector>

#include "moseve/geometry/radar_frame.hpp"

namespace moseve::geom {

/// Greedy max-min subset of `count` indices on 3D distance. The seed picks the
/// start point by canonical rank, so the choice does not depend on storage
/// order. Ties go to the lower index.
std::vector<std::size_t> farthest_point_sample(Cloud cloud, std::size_t count, std::uint64_t seed);

/// `k` nearest points by 3D distance, ties by lower index. When the cloud has
/// fewer than `k` points the sorted list repeats cyclically.
NeighborSet knn(const RadarPoint& query, Cloud cloud, int k, std::size_t query_index = NeighborSet::kExternalQuery,
                NeighborSource source = NeighborSource::kSameFrame);

/// Uniform random `k` points within `radius` of the query. If fewer than `k`
/// points fall inside, every in-ball point is taken once and the rest are
/// drawn with replacement. Requires a non-empty ball.
NeighborSet ball_query_sample(const RadarPoint& query, Cloud cloud, double radius, int k, std::uint64_t seed,
                              std::size_t query_index = NeighborSet::kExternalQuery,
                              NeighborSource source = NeighborSource::kSameFrame);

/// Ball query against another cloud; falls back to `knn` when the ball is empty.
NeighborSet ball_query_or_nearest(const RadarPoint& query, Cloud cloud, double radius, int k, std::uint64_t seed,
                                  NeighborSource source = NeighborSource::kPreviousFrame);

/// Distance ranks 0, g, 2g, ..., (k-1)g (ties by lower index), wrapping
/// modulo the cloud size.
NeighborSet interval_sample(const RadarPoint& query, Cloud cloud, int stride, int k,
                            std::size_t query_index = NeighborSet::kExternalQuery);

/// `count` points drawn uniformly: without replacement when the frame is
/// large enough, with replacement otherwise. Labels travel with their points.
RadarFrame random_subsample(const RadarFrame& frame, std::size_t count, std::uint64_t seed);

}  // namespace moseve::geom

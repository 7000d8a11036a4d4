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

#include "moseve/attention/attention.hpp"

#include <algorithm>
#include <cmath>

#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"
#include "moseve/geometry/sampling.hpp"

namespace moseve::attn {

PositionEncoder::PositionEncoder(std::size_t width, EncoderDepth depth, double input_scale, Rng& rng)
    : depth_(depth), input_scale_(input_scale) {
  if (depth == EncoderDepth::kShallow) {
    mlp_ = Mlp({3, width, width}, false, rng);
  } else {
    mlp_ = Mlp({3, width, width, width}, true, rng);
  }
}

Tensor PositionEncoder::forward(const Tensor& residuals) const {
  if (residuals.rank() != 2 || residuals.dim(1) != 3) {
    throw DimensionError("PositionEncoder: residuals must be [M x 3], got " + ad::shape_string(residuals.shape()));
  }
  return mlp_.forward(input_scale_ == 1.0 ? residuals : ad::scale(residuals, input_scale_));
}

void PositionEncoder::collect(const std::string& prefix, ParameterList& out) const { mlp_.collect(prefix, out); }

Tensor position_encoding(const PositionEncoder& encoder, const RadarPoint& p_i, const RadarPoint& p_j) {
  return encoder.forward(Tensor::from({1, 3}, {p_i.x - p_j.x, p_i.y - p_j.y, p_i.z - p_j.z}));
}

AttentionLayerParams AttentionLayerParams::create(std::size_t in_dim, std::size_t out_dim, EncoderDepth depth,
                                                  double input_scale, Rng& rng) {
  AttentionLayerParams p;
  p.alpha = Linear(in_dim, out_dim, rng);
  p.beta = Linear(in_dim, out_dim, rng);
  p.gamma = Linear(in_dim, out_dim, rng);
  p.delta = Mlp({out_dim, out_dim, out_dim}, false, rng);
  p.position = PositionEncoder(out_dim, depth, input_scale, rng);
  return p;
}

void AttentionLayerParams::collect(const std::string& prefix, ParameterList& out) const {
  alpha.collect(prefix + ".alpha", out);
  beta.collect(prefix + ".beta", out);
  gamma.collect(prefix + ".gamma", out);
  delta.collect(prefix + ".delta", out);
  position.collect(prefix + ".position", out);
}

Tensor vector_attention(const AttentionLayerParams& params, const Tensor& query_features, Cloud query_points,
                        const Tensor& source_features, Cloud source_points, std::span<const NeighborSet> neighbors,
                        AttentionTrace* trace) {
  const std::size_t nq = query_points.size(), ns = source_points.size();
  if (nq == 0 || ns == 0) throw ArgumentError("vector_attention: empty point set");
  if (query_features.rank() != 2 || query_features.dim(0) != nq || query_features.dim(1) != params.in_dim()) {
    throw ContractError("vector_attention: query features " + ad::shape_string(query_features.shape()) + " for " +
                        std::to_string(nq) + " points of width " + std::to_string(params.in_dim()));
  }
  if (source_features.rank() != 2 || source_features.dim(0) != ns || source_features.dim(1) != params.in_dim()) {
    throw ContractError("vector_attention: source features " + ad::shape_string(source_features.shape()) + " for " +
                        std::to_string(ns) + " points of width " + std::to_string(params.in_dim()));
  }
  if (neighbors.size() != nq) throw ContractError("vector_attention: one neighbor set per query required");
  const std::size_t k = neighbors.front().indices.size();
  if (k == 0) throw ContractError("vector_attention: empty neighbor set");

  std::vector<std::size_t> flat, repeat;
  std::vector<double> residual;
  flat.reserve(nq * k);
  repeat.reserve(nq * k);
  residual.reserve(nq * k * 3);
  for (std::size_t i = 0; i < nq; ++i) {
    if (neighbors[i].indices.size() != k) throw ContractError("vector_attention: neighbor sets differ in size");
    for (std::size_t j : neighbors[i].indices) {
      if (j >= ns) throw ContractError("vector_attention: neighbor index out of range");
      flat.push_back(j);
      repeat.push_back(i);
      const RadarPoint& q = query_points[i];
      const RadarPoint& s = source_points[j];
      residual.insert(residual.end(), {q.x - s.x, q.y - s.y, q.z - s.z});
    }
  }

  const Tensor enc = params.position.forward(Tensor::from({nq * k, 3}, std::move(residual)));
  const Tensor relation = ad::gather_difference(params.alpha.forward(query_features), repeat,
                                                params.beta.forward(source_features), flat, enc);
  const Tensor weights = ad::softmax_groups(params.delta.forward(relation), k);
  if (trace) {
    trace->weights = weights;
    trace->k = k;
  }
  return ad::weighted_gather_sum(weights, params.gamma.forward(source_features), flat, enc, k);
}

Tensor vector_self_attention(const AttentionLayerParams& params, const Tensor& features, Cloud points,
                             std::span<const NeighborSet> neighbors, AttentionTrace* trace) {
  return vector_attention(params, features, points, features, points, neighbors, trace);
}

std::uint64_t query_seed(std::uint64_t layer_seed, std::size_t rank) {
  return mix_seed({layer_seed, static_cast<std::uint64_t>(rank)});
}

std::vector<NeighborSet> ball_neighbors(Cloud queries, Cloud source, double radius, int k, std::uint64_t seed,
                                        bool queries_in_source) {
  std::vector<NeighborSet> out;
  out.reserve(queries.size());
  const auto ranks = geom::canonical_ranks(queries);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::uint64_t s = query_seed(seed, ranks[i]);
    if (queries_in_source) {
      out.push_back(geom::ball_query_sample(queries[i], source, radius, k, s, i));
    } else {
      out.push_back(geom::ball_query_or_nearest(queries[i], source, radius, k, s));
      out.back().query = i;
    }
  }
  return out;
}

std::vector<NeighborSet> interval_neighbors(Cloud points, int stride, int k) {
  std::vector<NeighborSet> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.push_back(geom::interval_sample(points[i], points, stride, k, i));
  return out;
}

Tensor object_attention(const AttentionLayerParams& params, Cloud points, const Tensor& features, double radius, int k,
                        std::uint64_t seed, AttentionTrace* trace) {
  const auto nbrs = ball_neighbors(points, points, radius, k, seed, true);
  return vector_self_attention(params, features, points, nbrs, trace);
}

Tensor scenario_attention(const AttentionLayerParams& params, Cloud points, const Tensor& features, int stride, int k,
                          AttentionTrace* trace) {
  const auto nbrs = interval_neighbors(points, stride, k);
  return vector_self_attention(params, features, points, nbrs, trace);
}

Tensor cross_attention(const AttentionLayerParams& params, const Tensor& features_t, Cloud points_t,
                       const Tensor& features_prev, Cloud points_prev, double radius, int k, std::uint64_t seed,
                       AttentionTrace* trace) {
  if (points_prev.empty()) throw ArgumentError("cross_attention: previous frame is empty");
  auto nbrs = ball_neighbors(points_t, points_prev, radius, k, seed, false);
  for (auto& n : nbrs) n.source = geom::NeighborSource::kPreviousFrame;
  return vector_attention(params, features_t, points_t, features_prev, points_prev, nbrs, trace);
}

Downsampled transition_down(Cloud points, const Tensor& features, std::size_t target,
                            const AttentionLayerParams& params, double radius, int k, std::uint64_t seed) {
  Downsampled out;
  out.indices = geom::farthest_point_sample(points, target, seed);
  out.points.reserve(target);
  for (auto i : out.indices) out.points.push_back(points[i]);
  const auto nbrs = ball_neighbors(out.points, points, radius, k, mix_seed({seed, 1}), true);
  out.features = vector_attention(params, ad::gather_rows(features, out.indices), out.points, features, points, nbrs);
  return out;
}

Tensor interpolate_features(Cloud coarse_points, const Tensor& coarse_features, Cloud fine_points) {
  if (coarse_points.empty()) throw ArgumentError("interpolate_features: empty coarse cloud");
  if (coarse_features.rank() != 2 || coarse_features.dim(0) != coarse_points.size()) {
    throw ContractError("interpolate_features: coarse features do not match coarse cloud");
  }
  const std::size_t m = std::min<std::size_t>(3, coarse_points.size());
  std::vector<std::size_t> idx;
  std::vector<double> w;
  idx.reserve(fine_points.size() * m);
  w.reserve(fine_points.size() * m);
  for (const auto& p : fine_points) {
    const auto nn = geom::knn(p, coarse_points, static_cast<int>(m));
    double d[3];
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < m; ++j) {
      d[j] = std::sqrt(geom::squared_distance(p, coarse_points[nn.indices[j]]));
      if (d[j] == 0.0) ++zeros;
    }
    double total = 0.0;
    double wj[3];
    for (std::size_t j = 0; j < m; ++j) {
      wj[j] = zeros ? (d[j] == 0.0 ? 1.0 : 0.0) : 1.0 / d[j];
      total += wj[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
      idx.push_back(nn.indices[j]);
      w.push_back(wj[j] / total);
    }
  }
  const std::size_t rows = idx.size();
  const Tensor gathered = ad::gather_rows(coarse_features, idx);
  return ad::group_sum(ad::scale_rows(gathered, Tensor::from({rows}, std::move(w))), m);
}

TransitionUp::TransitionUp(std::size_t coarse_dim, std::size_t skip_dim, std::size_t out_dim, Rng& rng)
    : fuse_(coarse_dim + skip_dim, out_dim, rng) {}

Tensor TransitionUp::forward(Cloud coarse_points, const Tensor& coarse_features, Cloud fine_points,
                             const Tensor& skip_features) const {
  const Tensor up = interpolate_features(coarse_points, coarse_features, fine_points);
  return fuse_.forward(ad::concat_cols(up, skip_features));
}

void TransitionUp::collect(const std::string& prefix, ParameterList& out) const { fuse_.collect(prefix + ".fuse", out); }

}  // namespace moseve::attn

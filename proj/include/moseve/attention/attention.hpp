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
#include <span>
#include <string>
#include <vector>

#include "moseve/attention/layers.hpp"
#include "moseve/geometry/radar_frame.hpp"

namespace moseve::attn {

using geom::Cloud;
using geom::NeighborSet;
using geom::RadarPoint;

enum class EncoderDepth {
  /// Linear, ReLU, Linear.
  kShallow,
  /// Three Linear layers, each followed by ReLU.
  kDeep,
};

/// Maps a coordinate residual p_i - p_j (scaled by `input_scale`) to a
/// feature-width vector.
class PositionEncoder {
 public:
  PositionEncoder() = default;
  PositionEncoder(std::size_t width, EncoderDepth depth, double input_scale, Rng& rng);

  /// residuals: [M x 3] -> [M x width]
  Tensor forward(const Tensor& residuals) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  std::size_t width() const { return mlp_.out_dim(); }
  EncoderDepth depth() const { return depth_; }
  double input_scale() const { return input_scale_; }
  const Mlp& mlp() const { return mlp_; }

 private:
  Mlp mlp_;
  EncoderDepth depth_ = EncoderDepth::kShallow;
  double input_scale_ = 1.0;
};

/// Encoding of one point pair, shape [1 x width].
Tensor position_encoding(const PositionEncoder& encoder, const RadarPoint& p_i, const RadarPoint& p_j);

/// Learnable parts of one vector-attention layer: query/key/value maps, the
/// relation MLP applied before the softmax, and the position encoder.
struct AttentionLayerParams {
  Linear alpha;
  Linear beta;
  Linear gamma;
  Mlp delta;
  PositionEncoder position;

  /// Query and source features have `in_dim` columns; outputs have `out_dim`.
  static AttentionLayerParams create(std::size_t in_dim, std::size_t out_dim, EncoderDepth depth, double input_scale,
                                     Rng& rng);

  std::size_t in_dim() const { return alpha.in_dim(); }
  std::size_t out_dim() const { return alpha.out_dim(); }
  void collect(const std::string& prefix, ParameterList& out) const;
};

/// Optional taps into an attention evaluation.
struct AttentionTrace {
  /// Post-softmax weights, [Nq*K x D], rows grouped per query.
  Tensor weights;
  std::size_t k = 0;
};

/// y_i = sum_j softmax_j( delta(alpha(x_i) - beta(s_j) + w_ij) ) * (gamma(s_j) + w_ij)
/// with w_ij the encoding of q_i - s_j and the softmax taken over each
/// query's K neighbours, per channel.
Tensor vector_attention(const AttentionLayerParams& params, const Tensor& query_features, Cloud query_points,
                        const Tensor& source_features, Cloud source_points, std::span<const NeighborSet> neighbors,
                        AttentionTrace* trace = nullptr);

Tensor vector_self_attention(const AttentionLayerParams& params, const Tensor& features, Cloud points,
                             std::span<const NeighborSet> neighbors, AttentionTrace* trace = nullptr);

/// Seed of one query's random stream; `rank` is its canonical rank.
std::uint64_t query_seed(std::uint64_t layer_seed, std::size_t rank);

std::vector<NeighborSet> ball_neighbors(Cloud queries, Cloud source, double radius, int k, std::uint64_t seed,
                                        bool queries_in_source);
std::vector<NeighborSet> interval_neighbors(Cloud points, int stride, int k);

/// Self-attention over random ball samples.
Tensor object_attention(const AttentionLayerParams& params, Cloud points, const Tensor& features, double radius, int k,
                        std::uint64_t seed, AttentionTrace* trace = nullptr);

/// Self-attention over distance-strided samples spanning the whole cloud.
Tensor scenario_attention(const AttentionLayerParams& params, Cloud points, const Tensor& features, int stride, int k,
                          AttentionTrace* trace = nullptr);

/// Current-frame queries attending to ball samples from the previous frame.
/// Queries with an empty ball fall back to their k nearest previous points.
Tensor cross_attention(const AttentionLayerParams& params, const Tensor& features_t, Cloud points_t,
                       const Tensor& features_prev, Cloud points_prev, double radius, int k, std::uint64_t seed,
                       AttentionTrace* trace = nullptr);

struct Downsampled {
  std::vector<RadarPoint> points;
  /// Index of each kept point in the input cloud.
  std::vector<std::size_t> indices;
  Tensor features;
};

/// FPS to `target` centers, each described by object attention over its ball
/// in the full-resolution cloud.
Downsampled transition_down(Cloud points, const Tensor& features, std::size_t target,
                            const AttentionLayerParams& params, double radius, int k, std::uint64_t seed);

/// Inverse-distance blend of each fine point's (up to) three nearest coarse
/// features. A coarse point at zero distance takes all the weight.
Tensor interpolate_features(Cloud coarse_points, const Tensor& coarse_features, Cloud fine_points);

/// Upsampling step of the decoder: interpolate coarse features onto the fine
/// cloud, concatenate the skip features, fuse with one affine layer.
class TransitionUp {
 public:
  TransitionUp() = default;
  TransitionUp(std::size_t coarse_dim, std::size_t skip_dim, std::size_t out_dim, Rng& rng);

  Tensor forward(Cloud coarse_points, const Tensor& coarse_features, Cloud fine_points,
                 const Tensor& skip_features) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  const Linear& fuse() const { return fuse_; }

 private:
  Linear fuse_;
};

}  // namespace moseve::attn

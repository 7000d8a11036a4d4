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

#include <cstdint>
#include <vector>

#include "moseve/network/encoder.hpp"

namespace moseve::net {

/// Ego-velocity network: shared encoder on both frames, cross-frame fusion,
/// global average pooling and a regression MLP.
class EveNetwork {
 public:
  EveNetwork(const EveConfig& config, std::uint64_t init_seed);

  /// Fused features of the current frame at 1/16 resolution, [N/16 x 128].
  Tensor backbone_forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const;
  /// Mean over points, then the head MLP. Returns a one-element tensor in m/s.
  Tensor head_forward(const Tensor& features) const;
  Tensor forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const;
  /// Inference without graph recording.
  double predict(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const;

  ad::ParameterList parameters() const;
  const EveConfig& config() const { return config_; }

 private:
  EveConfig config_;
  RadarEncoder encoder_;
  attn::AttentionLayerParams fusion_;
  attn::Mlp head_;
};

/// Moving-object segmentation network: the EVE encoder layout with a deeper
/// fusion position encoder, a two-step U-net decoder, and a per-point head.
class MosNetwork {
 public:
  MosNetwork(const MosConfig& config, std::uint64_t init_seed);

  /// Per-point segmentation features of the current frame, [N x 32].
  Tensor backbone_forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const;
  /// [N x 32] -> [N x 2] logits.
  Tensor head_forward(const Tensor& features) const;
  Tensor forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const;
  std::vector<geom::Motion> predict(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const;

  ad::ParameterList parameters() const;
  const MosConfig& config() const { return config_; }

 private:
  MosConfig config_;
  RadarEncoder encoder_;
  attn::AttentionLayerParams fusion_;
  attn::TransitionUp up_mid_;
  attn::AttentionLayerParams decode_object_;
  attn::TransitionUp up_fine_;
  attn::AttentionLayerParams decode_scenario_;
  attn::Mlp head_;
};

/// Argmax over two-class logits.
std::vector<geom::Motion> argmax_labels(const Tensor& logits);

}  // namespace moseve::net

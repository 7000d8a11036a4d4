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

#include "moseve/attention/attention.hpp"
#include "moseve/network/config.hpp"

namespace moseve::net {

using ad::Tensor;
using geom::RadarFrame;
using geom::RadarPoint;

/// Per-resolution outputs of the intra-frame stages: full, 1/4 and 1/16.
struct EncodedFrame {
  std::array<std::vector<RadarPoint>, 3> points;
  std::array<Tensor, 3> features;
};

/// [N x 4] network input (x, y, z, v), scaled per the backbone config.
Tensor point_inputs(geom::Cloud cloud, const BackboneConfig& config);

/// Shared intra-frame stages of the EVE and MOS backbones.
class RadarEncoder {
 public:
  RadarEncoder() = default;
  RadarEncoder(const BackboneConfig& config, Rng& rng);

  EncodedFrame encode(geom::Cloud cloud, std::uint64_t seed) const;
  void collect(const std::string& prefix, ad::ParameterList& out) const;

  const BackboneConfig& config() const { return config_; }

 private:
  BackboneConfig config_;
  attn::Mlp embed_;
  attn::AttentionLayerParams object_;
  attn::AttentionLayerParams down_mid_;
  attn::AttentionLayerParams down_coarse_;
  attn::AttentionLayerParams scenario_;
};

/// Per-frame seeds for the two inputs of one forward pass.
std::uint64_t current_frame_seed(std::uint64_t seed);
std::uint64_t previous_frame_seed(std::uint64_t seed);
std::uint64_t fusion_seed(std::uint64_t seed);

}  // namespace moseve::net

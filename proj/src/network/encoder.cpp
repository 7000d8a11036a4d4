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

#include "moseve/network/encoder.hpp"

#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"

namespace moseve::net {

Tensor point_inputs(geom::Cloud cloud, const BackboneConfig& config) {
  if (cloud.empty()) throw ArgumentError("point_inputs: empty cloud");
  std::vector<double> values;
  values.reserve(cloud.size() * 4);
  const double cs = config.coord_scale, vs = config.velocity_scale;
  for (const auto& p : cloud) values.insert(values.end(), {p.x * cs, p.y * cs, p.z * cs, p.v * vs});
  return Tensor::from({cloud.size(), 4}, std::move(values));
}

RadarEncoder::RadarEncoder(const BackboneConfig& config, Rng& rng) : config_(config) {
  config_.validate();
  const auto& w = config_.stage_widths;
  const double s = config_.coord_scale;
  embed_ = attn::Mlp({4, w[0], w[0]}, false, rng);
  object_ = attn::AttentionLayerParams::create(w[0], w[0], attn::EncoderDepth::kShallow, s, rng);
  down_mid_ = attn::AttentionLayerParams::create(w[0], w[1], attn::EncoderDepth::kShallow, s, rng);
  down_coarse_ = attn::AttentionLayerParams::create(w[1], w[2], attn::EncoderDepth::kShallow, s, rng);
  scenario_ = attn::AttentionLayerParams::create(w[2], w[2], attn::EncoderDepth::kShallow, s, rng);
}

EncodedFrame RadarEncoder::encode(geom::Cloud cloud, std::uint64_t seed) const {
  const auto counts = config_.stage_counts(cloud.size());
  const auto& r = config_.stage_radii;
  const int k = config_.k;

  EncodedFrame out;
  out.points[0].assign(cloud.begin(), cloud.end());
  const Tensor embedded = embed_.forward(point_inputs(cloud, config_));
  out.features[0] =
      ad::add(embedded, attn::object_attention(object_, cloud, embedded, r[0], k, mix_seed({seed, 1})));

  auto mid = attn::transition_down(out.points[0], out.features[0], counts[1], down_mid_, r[1], k, mix_seed({seed, 2}));
  out.points[1] = std::move(mid.points);
  out.features[1] = ad::relu(mid.features);

  auto coarse =
      attn::transition_down(out.points[1], out.features[1], counts[2], down_coarse_, r[2], k, mix_seed({seed, 3}));
  out.points[2] = std::move(coarse.points);
  const Tensor coarse_features = ad::relu(coarse.features);
  out.features[2] = ad::add(coarse_features, attn::scenario_attention(scenario_, out.points[2], coarse_features,
                                                                      config_.stride, k));
  return out;
}

void RadarEncoder::collect(const std::string& prefix, ad::ParameterList& out) const {
  embed_.collect(prefix + ".embed", out);
  object_.collect(prefix + ".object", out);
  down_mid_.collect(prefix + ".down_mid", out);
  down_coarse_.collect(prefix + ".down_coarse", out);
  scenario_.collect(prefix + ".scenario", out);
}

std::uint64_t current_frame_seed(std::uint64_t seed) { return mix_seed({seed, 0x7}); }
std::uint64_t previous_frame_seed(std::uint64_t seed) { return mix_seed({seed, 0x8}); }
std::uint64_t fusion_seed(std::uint64_t seed) { return mix_seed({seed, 0x9}); }

}  // namespace moseve::net

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

#include "moseve/network/models.hpp"

#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"

namespace moseve::net {

namespace {

void require_frames(const RadarFrame& t, const RadarFrame& prev) {
  if (t.empty() || prev.empty()) throw ArgumentError("network input frames must be non-empty");
}

}  // namespace

EveNetwork::EveNetwork(const EveConfig& config, std::uint64_t init_seed) : config_(config) {
  config_.validate();
  Rng rng(init_seed);
  const auto& b = config_.backbone;
  encoder_ = RadarEncoder(b, rng);
  fusion_ = attn::AttentionLayerParams::create(b.stage_widths[2], b.stage_widths[3], attn::EncoderDepth::kShallow,
                                               b.coord_scale, rng);
  std::vector<std::size_t> sizes{b.stage_widths[3]};
  sizes.insert(sizes.end(), config_.head_sizes.begin(), config_.head_sizes.end());
  head_ = attn::Mlp(sizes, false, rng);
}

Tensor EveNetwork::backbone_forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const {
  require_frames(frame_t, frame_prev);
  const auto& b = config_.backbone;
  const EncodedFrame cur = encoder_.encode(frame_t.cloud(), current_frame_seed(seed));
  const EncodedFrame prev = encoder_.encode(frame_prev.cloud(), previous_frame_seed(seed));
  const Tensor fused = attn::cross_attention(fusion_, cur.features[2], cur.points[2], prev.features[2], prev.points[2],
                                             b.stage_radii[3], b.k, fusion_seed(seed));
  return ad::add(cur.features[2], fused);
}

Tensor EveNetwork::head_forward(const Tensor& features) const {
  if (features.rank() != 2 || features.dim(0) == 0) throw ArgumentError("eve head: empty feature set");
  const Tensor out = head_.forward(ad::mean_rows(features));
  // The head works in scaled velocity units.
  return ad::reshape(ad::scale(out, 1.0 / config_.backbone.velocity_scale), {1});
}

Tensor EveNetwork::forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const {
  return head_forward(backbone_forward(frame_t, frame_prev, seed));
}

double EveNetwork::predict(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const {
  ad::NoGradGuard guard;
  return forward(frame_t, frame_prev, seed).item();
}

ad::ParameterList EveNetwork::parameters() const {
  ad::ParameterList out;
  encoder_.collect("eve.encoder", out);
  fusion_.collect("eve.fusion", out);
  head_.collect("eve.head", out);
  return out;
}

MosNetwork::MosNetwork(const MosConfig& config, std::uint64_t init_seed) : config_(config) {
  config_.validate();
  Rng rng(init_seed);
  const auto& e = config_.encoder;
  const auto& w = e.stage_widths;
  const auto& d = config_.decoder_widths;
  encoder_ = RadarEncoder(e, rng);
  fusion_ = attn::AttentionLayerParams::create(w[2], w[3], attn::EncoderDepth::kDeep, e.coord_scale, rng);
  up_mid_ = attn::TransitionUp(w[3], w[1], d[0], rng);
  decode_object_ = attn::AttentionLayerParams::create(d[0], d[0], attn::EncoderDepth::kShallow, e.coord_scale, rng);
  up_fine_ = attn::TransitionUp(d[0], w[0], d[1], rng);
  decode_scenario_ = attn::AttentionLayerParams::create(d[1], d[1], attn::EncoderDepth::kShallow, e.coord_scale, rng);
  std::vector<std::size_t> sizes{d[1]};
  sizes.insert(sizes.end(), config_.head_sizes.begin(), config_.head_sizes.end());
  head_ = attn::Mlp(sizes, false, rng);
}

Tensor MosNetwork::backbone_forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const {
  require_frames(frame_t, frame_prev);
  const auto& e = config_.encoder;
  const EncodedFrame cur = encoder_.encode(frame_t.cloud(), current_frame_seed(seed));
  const EncodedFrame prev = encoder_.encode(frame_prev.cloud(), previous_frame_seed(seed));
  const Tensor fused = ad::add(cur.features[2], attn::cross_attention(fusion_, cur.features[2], cur.points[2],
                                                                      prev.features[2], prev.points[2],
                                                                      e.stage_radii[3], e.k, fusion_seed(seed)));

  const Tensor mid = up_mid_.forward(cur.points[2], fused, cur.points[1], cur.features[1]);
  const Tensor mid_out = ad::add(mid, attn::object_attention(decode_object_, cur.points[1], mid, e.stage_radii[1], e.k,
                                                             mix_seed({seed, 0xdec})));
  const Tensor fine = up_fine_.forward(cur.points[1], mid_out, cur.points[0], cur.features[0]);
  return ad::add(fine, attn::scenario_attention(decode_scenario_, cur.points[0], fine, e.stride, e.k));
}

Tensor MosNetwork::head_forward(const Tensor& features) const { return head_.forward(features); }

Tensor MosNetwork::forward(const RadarFrame& frame_t, const RadarFrame& frame_prev, std::uint64_t seed) const {
  return head_forward(backbone_forward(frame_t, frame_prev, seed));
}

std::vector<geom::Motion> MosNetwork::predict(const RadarFrame& frame_t, const RadarFrame& frame_prev,
                                              std::uint64_t seed) const {
  ad::NoGradGuard guard;
  return argmax_labels(forward(frame_t, frame_prev, seed));
}

ad::ParameterList MosNetwork::parameters() const {
  ad::ParameterList out;
  encoder_.collect("mos.encoder", out);
  fusion_.collect("mos.fusion", out);
  up_mid_.collect("mos.up_mid", out);
  decode_object_.collect("mos.decode_object", out);
  up_fine_.collect("mos.up_fine", out);
  decode_scenario_.collect("mos.decode_scenario", out);
  head_.collect("mos.head", out);
  return out;
}

std::vector<geom::Motion> argmax_labels(const Tensor& logits) {
  if (logits.rank() != 2 || logits.dim(1) != 2) throw DimensionError("argmax_labels: expected [N x 2] logits");
  std::vector<geom::Motion> out(logits.dim(0));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = logits.at(i, 1) > logits.at(i, 0) ? geom::Motion::kMoving : geom::Motion::kStatic;
  }
  return out;
}

}  // namespace moseve::net

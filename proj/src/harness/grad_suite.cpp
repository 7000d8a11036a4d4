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

#include "moseve/harness/grad_suite.hpp"

#include "moseve/attention/attention.hpp"
#include "moseve/autodiff/ops.hpp"
#include "moseve/geometry/sampling.hpp"
#include "moseve/network/losses.hpp"
#include "moseve/network/models.hpp"

namespace moseve::harness {

namespace {

using ad::Tensor;

Tensor random_tensor(ad::Shape shape, Rng& rng, double scale = 1.0) {
  std::vector<double> v(ad::shape_numel(shape));
  for (double& x : v) x = uniform_real(rng, -scale, scale);
  Tensor t = Tensor::from(std::move(shape), std::move(v));
  t.set_requires_grad(true);
  return t;
}

std::vector<geom::RadarPoint> random_cloud(std::size_t n, Rng& rng) {
  std::vector<geom::RadarPoint> out(n);
  for (auto& p : out) {
    p = {uniform_real(rng, -4.0, 4.0), uniform_real(rng, 1.0, 9.0), uniform_real(rng, -0.5, 1.5),
         uniform_real(rng, -3.0, 3.0)};
  }
  return out;
}

std::vector<Tensor> tensors_of(const ad::ParameterList& params, const std::string& prefix = "") {
  std::vector<Tensor> out;
  for (const auto& p : params) {
    if (p.name.rfind(prefix, 0) == 0) out.push_back(p.tensor);
  }
  return out;
}

std::vector<Tensor> plus(std::vector<Tensor> a, std::initializer_list<Tensor> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

net::BackboneConfig tiny_backbone() {
  net::BackboneConfig b;
  b.stage_widths = {4, 6, 8, 8};
  b.stage_radii = {3.0, 5.0, 8.0, 8.0};
  b.k = 4;
  return b;
}

}  // namespace

std::vector<GradSuiteEntry> run_grad_suite(std::uint64_t seed, double tolerance) {
  std::vector<GradSuiteEntry> out;
  Rng rng(seed);
  ad::GradCheckOptions opts;
  opts.seed = mix_seed({seed, 0x9c});
  auto check = [&](const std::string& name, const std::function<Tensor()>& f, const std::vector<Tensor>& wrt) {
    out.push_back({name, ad::grad_check(f, wrt, tolerance, opts)});
  };

  {
    Tensor x = random_tensor({4, 3}, rng), w = random_tensor({3, 2}, rng), b = random_tensor({2}, rng);
    check("affine", [=] { return ad::affine(x, w, b); }, {x, w, b});
  }
  {
    Tensor x = random_tensor({5, 4}, rng);
    check("relu", [=] { return ad::relu(x); }, {x});
  }
  {
    Tensor x = random_tensor({4, 5}, rng, 3.0);
    check("softmax", [=] { return ad::softmax_lastdim(x); }, {x});
  }

  const auto cloud = random_cloud(32, rng);
  const auto prev_cloud = random_cloud(24, rng);
  const std::size_t d = 6;
  {
    attn::PositionEncoder enc(d, attn::EncoderDepth::kShallow, 0.3, rng);
    ad::ParameterList params;
    enc.collect("pos", params);
    check("position_encoder", [&] { return attn::position_encoding(enc, cloud[0], cloud[1]); }, tensors_of(params));
    attn::PositionEncoder deep(d, attn::EncoderDepth::kDeep, 0.3, rng);
    ad::ParameterList deep_params;
    deep.collect("pos", deep_params);
    check("position_encoder_deep", [&] { return attn::position_encoding(deep, cloud[2], cloud[5]); },
          tensors_of(deep_params));
  }
  {
    auto layer = attn::AttentionLayerParams::create(d, d, attn::EncoderDepth::kShallow, 0.3, rng);
    ad::ParameterList params;
    layer.collect("attn", params);
    Tensor x = random_tensor({cloud.size(), d}, rng);
    std::vector<geom::NeighborSet> nbrs;
    for (std::size_t i = 0; i < cloud.size(); ++i) nbrs.push_back(geom::knn(cloud[i], cloud, 4, i));
    check("vector_self_attention", [&] { return attn::vector_self_attention(layer, x, cloud, nbrs); },
          plus(tensors_of(params), {x}));
  }
  {
    auto layer = attn::AttentionLayerParams::create(d, d, attn::EncoderDepth::kDeep, 0.3, rng);
    ad::ParameterList params;
    layer.collect("cross", params);
    Tensor xt = random_tensor({cloud.size(), d}, rng), xp = random_tensor({prev_cloud.size(), d}, rng);
    check("cross_attention",
          [&] { return attn::cross_attention(layer, xt, cloud, xp, prev_cloud, 3.0, 4, mix_seed({seed, 1})); },
          plus(tensors_of(params), {xt, xp}));
  }
  {
    const std::vector<geom::RadarPoint> coarse(cloud.begin(), cloud.begin() + 8);
    attn::TransitionUp up(5, 3, 4, rng);
    ad::ParameterList params;
    up.collect("up", params);
    Tensor xc = random_tensor({coarse.size(), 5}, rng), skip = random_tensor({cloud.size(), 3}, rng);
    check("transition_up", [&] { return up.forward(coarse, xc, cloud, skip); }, plus(tensors_of(params), {xc, skip}));
  }

  net::EveConfig eve_config;
  eve_config.backbone = tiny_backbone();
  eve_config.head_sizes = {16, 8, 1};
  const net::EveNetwork eve(eve_config, mix_seed({seed, 2}));
  net::MosConfig mos_config;
  mos_config.encoder = tiny_backbone();
  mos_config.decoder_widths = {6, 32};
  mos_config.head_sizes = {8, 6, 2};
  const net::MosNetwork mos(mos_config, mix_seed({seed, 3}));
  {
    Tensor f = random_tensor({8, 8}, rng);
    check("eve_head", [&] { return eve.head_forward(f); }, plus(tensors_of(eve.parameters(), "eve.head"), {f}));
    Tensor g = random_tensor({32, 32}, rng);
    check("mos_head", [&] { return mos.head_forward(g); }, plus(tensors_of(mos.parameters(), "mos.head"), {g}));
  }
  geom::RadarFrame frame_t, frame_prev;
  frame_t.points = cloud;
  frame_prev.points = random_cloud(32, rng);
  {
    check("eve_end_to_end", [&] { return eve.forward(frame_t, frame_prev, 11); }, tensors_of(eve.parameters()));
    check("mos_end_to_end", [&] { return mos.forward(frame_t, frame_prev, 12); }, tensors_of(mos.parameters()));
  }
  {
    Tensor v_hat = random_tensor({1}, rng, 5.0);
    check("doppler_loss", [&] { return net::doppler_loss(v_hat, cloud); }, {v_hat});
    check("eve_loss", [&] { return net::eve_loss(v_hat, 1.7, cloud); }, {v_hat});
    Tensor logits = random_tensor({32, 2}, rng, 2.0);
    std::vector<geom::Motion> labels(32);
    for (auto& l : labels) l = uniform_unit(rng) < 0.3 ? geom::Motion::kMoving : geom::Motion::kStatic;
    check("mos_loss", [&, labels] { return net::mos_loss(logits, labels, {0.7, 1.9}); }, {logits});
  }
  return out;
}

}  // namespace moseve::harness

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

#include "moseve/network/losses.hpp"

#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"
#include "moseve/geometry/velocity.hpp"

namespace moseve::net {

std::vector<geom::RadarPoint> static_points(const geom::RadarFrame& frame) {
  if (!frame.labels) throw ArgumentError("static_points: frame has no labels");
  frame.validate();
  std::vector<geom::RadarPoint> out;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if ((*frame.labels)[i] == geom::Motion::kStatic) out.push_back(frame.points[i]);
  }
  return out;
}

ad::Tensor doppler_loss(const ad::Tensor& v_hat, std::span<const geom::RadarPoint> statics) {
  if (statics.empty()) throw ArgumentError("doppler_loss: empty static point set");
  if (v_hat.numel() != 1) throw DimensionError("doppler_loss: v_hat must hold one value");
  std::vector<double> dirs, measured;
  dirs.reserve(statics.size());
  measured.reserve(statics.size());
  for (const auto& p : statics) {
    dirs.push_back(geom::radial_projection(1.0, p));
    measured.push_back(p.v);
  }
  const std::size_t n = statics.size();
  const ad::Tensor predicted = ad::scale_by(ad::Tensor::from({n}, std::move(dirs)), v_hat);
  return ad::mean(ad::abs(ad::sub(predicted, ad::Tensor::from({n}, std::move(measured)))));
}

ad::Tensor squared_error(const ad::Tensor& v_hat, double v) {
  if (v_hat.numel() != 1) throw DimensionError("squared_error: v_hat must hold one value");
  return ad::sum(ad::square(ad::sub(ad::reshape(v_hat, {1}), ad::Tensor::from({1}, {v}))));
}

ad::Tensor eve_loss(const ad::Tensor& v_hat, double v, std::span<const geom::RadarPoint> statics) {
  return ad::add(doppler_loss(v_hat, statics), squared_error(v_hat, v));
}

ad::Tensor mos_loss(const ad::Tensor& logits, std::span<const geom::Motion> labels,
                    const std::array<double, 2>& class_weights) {
  if (logits.rank() != 2 || logits.dim(1) != 2 || logits.dim(0) != labels.size()) {
    throw DimensionError("mos_loss: expected [N x 2] logits with N labels");
  }
  std::vector<int> ids(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) ids[i] = static_cast<int>(labels[i]);
  return ad::weighted_nll(ad::log_softmax_lastdim(logits), ids, class_weights);
}

std::array<double, 2> inverse_frequency_weights(std::size_t static_count, std::size_t moving_count) {
  if (static_count == 0 || moving_count == 0) return {1.0, 1.0};
  const double total = static_cast<double>(static_count + moving_count);
  const double ws = total / static_cast<double>(static_count);
  const double wm = total / static_cast<double>(moving_count);
  const double mean = 0.5 * (ws + wm);
  return {ws / mean, wm / mean};
}

}  // namespace moseve::net

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

#include "moseve/attention/layers.hpp"

#include <cmath>

#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"

namespace moseve::attn {

Linear::Linear(std::size_t in, std::size_t out, Rng& rng) {
  if (in == 0 || out == 0) throw ArgumentError("Linear: widths must be positive");
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::vector<double> w(in * out), b(out);
  for (auto& v : w) v = uniform_real(rng, -bound, bound);
  for (auto& v : b) v = uniform_real(rng, -bound, bound);
  weight_ = Tensor::from({in, out}, std::move(w), true);
  bias_ = Tensor::from({out}, std::move(b), true);
}

Tensor Linear::forward(const Tensor& x) const { return ad::affine(x, weight_, bias_); }

void Linear::collect(const std::string& prefix, ParameterList& out) const {
  out.push_back({prefix + ".weight", weight_});
  out.push_back({prefix + ".bias", bias_});
}

Mlp::Mlp(const std::vector<std::size_t>& sizes, bool relu_after_last, Rng& rng) : relu_after_last_(relu_after_last) {
  if (sizes.size() < 2) throw ArgumentError("Mlp: need an input width and at least one layer");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) layers_.emplace_back(sizes[i], sizes[i + 1], rng);
}

Tensor Mlp::forward(const Tensor& x) const {
  Tensor h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i].forward(h);
    if (i + 1 < layers_.size() || relu_after_last_) h = ad::relu(h);
  }
  return h;
}

void Mlp::collect(const std::string& prefix, ParameterList& out) const {
  for (std::size_t i = 0; i < layers_.size(); ++i) layers_[i].collect(prefix + "." + std::to_string(i), out);
}

}  // namespace moseve::attn

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
#include <string>
#include <vector>

#include "moseve/autodiff/optim.hpp"
#include "moseve/autodiff/tensor.hpp"
#include "moseve/rng.hpp"

namespace moseve::attn {

using ad::ParameterList;
using ad::Tensor;

/// Fully connected layer, weight [in x out].
class Linear {
 public:
  Linear() = default;
  Linear(std::size_t in, std::size_t out, Rng& rng);

  Tensor forward(const Tensor& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  std::size_t in_dim() const { return weight_.dim(0); }
  std::size_t out_dim() const { return weight_.dim(1); }
  const Tensor& weight() const { return weight_; }
  const Tensor& bias() const { return bias_; }

 private:
  Tensor weight_;
  Tensor bias_;
};

/// Stack of Linear layers with ReLU between them, and optionally after the last.
class Mlp {
 public:
  Mlp() = default;
  /// `sizes` lists the input width followed by each layer's output width.
  Mlp(const std::vector<std::size_t>& sizes, bool relu_after_last, Rng& rng);

  Tensor forward(const Tensor& x) const;
  void collect(const std::string& prefix, ParameterList& out) const;

  std::size_t in_dim() const { return layers_.front().in_dim(); }
  std::size_t out_dim() const { return layers_.back().out_dim(); }
  const std::vector<Linear>& layers() const { return layers_; }
  bool relu_after_last() const { return relu_after_last_; }

 private:
  std::vector<Linear> layers_;
  bool relu_after_last_ = false;
};

}  // namespace moseve::attn

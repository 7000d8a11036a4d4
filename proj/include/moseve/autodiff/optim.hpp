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
#include <string>
#include <vector>

#include "moseve/autodiff/tensor.hpp"

namespace moseve::ad {

struct Parameter {
  std::string name;
  Tensor tensor;
};

using ParameterList = std::vector<Parameter>;

/// Throws ContractError on duplicate names.
void check_unique_names(const ParameterList& params);
void zero_grads(const ParameterList& params);
std::size_t parameter_count(const ParameterList& params);

struct AdamOptions {
  double learning_rate = 1e-3;
  double weight_decay = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment buffers for one parameter list, aligned by position.
class AdamState {
 public:
  AdamState(const ParameterList& params, AdamOptions options);

  const AdamOptions& options() const { return options_; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }
  std::int64_t step() const { return step_; }

 private:
  friend void adam_step(const ParameterList& params, AdamState& state);

  AdamOptions options_;
  std::int64_t step_ = 0;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
};

/// One Adam update. Weight decay is coupled: added to the gradient before the
/// moment updates.
void adam_step(const ParameterList& params, AdamState& state);

/// Step decay: rate(e) = initial * ratio^floor(e / period).
struct LrSchedule {
  double initial = 1e-3;
  double ratio = 0.5;
  int period = 20;

  double rate(int epoch) const;
};

}  // namespace moseve::ad

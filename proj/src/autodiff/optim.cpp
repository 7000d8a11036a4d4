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

#include "moseve/autodiff/optim.hpp"

#include <cmath>
#include <set>

#include "moseve/errors.hpp"

namespace moseve::ad {

void check_unique_names(const ParameterList& params) {
  std::set<std::string> names;
  for (const auto& p : params) {
    if (!names.insert(p.name).second) throw ContractError("duplicate parameter name: " + p.name);
  }
}

void zero_grads(const ParameterList& params) {
  for (const auto& p : params) {
    Tensor t = p.tensor;
    t.zero_grad();
  }
}

std::size_t parameter_count(const ParameterList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.tensor.numel();
  return n;
}

AdamState::AdamState(const ParameterList& params, AdamOptions options) : options_(options) {
  first_.reserve(params.size());
  second_.reserve(params.size());
  for (const auto& p : params) {
    first_.emplace_back(p.tensor.numel(), 0.0);
    second_.emplace_back(p.tensor.numel(), 0.0);
  }
}

void adam_step(const ParameterList& params, AdamState& state) {
  if (params.size() != state.first_.size()) {
    throw ContractError("adam_step: parameter list does not match optimizer state");
  }
  for (const auto& p : params) {
    if (!p.tensor.has_grad()) throw ContractError("adam_step: parameter '" + p.name + "' has no gradient");
  }
  ++state.step_;
  const auto& o = state.options_;
  const double t = static_cast<double>(state.step_);
  const double bias1 = 1.0 - std::pow(o.beta1, t);
  const double bias2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor w = params[k].tensor;
    auto values = w.mutable_data();
    auto grads = w.grad();
    auto& m = state.first_[k];
    auto& v = state.second_[k];
    if (m.size() != values.size()) throw ContractError("adam_step: moment buffer shape mismatch for " + params[k].name);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grads[i] + o.weight_decay * values[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g;
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
      const double mhat = m[i] / bias1;
      const double vhat = v[i] / bias2;
      values[i] -= o.learning_rate * mhat / (std::sqrt(vhat) + o.epsilon);
    }
  }
}

double LrSchedule::rate(int epoch) const {
  if (period <= 0) throw ArgumentError("LrSchedule: period must be positive");
  if (epoch < 0) throw ArgumentError("LrSchedule: negative epoch");
  return initial * std::pow(ratio, epoch / period);
}

}  // namespace moseve::ad

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

#include "moseve/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "moseve/autodiff/ops.hpp"
#include "moseve/rng.hpp"

namespace moseve::ad {

namespace {

Tensor project(const Tensor& out, const std::vector<double>& weights) {
  if (out.numel() == 1) return out;
  return sum(mul(out, Tensor::from(out.shape(), weights)));
}

std::vector<double> projection_weights(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(n);
  for (auto& v : w) v = uniform_real(rng, -1.0, 1.0);
  return w;
}

}  // namespace

GradCheckResult grad_check(const std::function<Tensor()>& fragment, const std::vector<Tensor>& wrt, double tolerance,
                           const GradCheckOptions& options) {
  std::vector<Tensor> inputs = wrt;
  std::vector<bool> had_flag;
  for (auto& t : inputs) {
    had_flag.push_back(t.requires_grad());
    t.set_requires_grad(true);
    t.zero_grad();
  }

  const Tensor first = fragment();
  const auto weights = projection_weights(first.numel(), options.seed);
  project(first, weights).backward();

  std::vector<std::vector<double>> analytic;
  for (auto& t : inputs) analytic.emplace_back(t.grad().begin(), t.grad().end());

  auto evaluate = [&]() {
    NoGradGuard guard;
    return project(fragment(), weights).item();
  };

  GradCheckResult result;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto values = inputs[k].mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double a = analytic[k][i];
      auto rel_error = [&](double step) {
        const double saved = values[i];
        values[i] = saved + step;
        const double up = evaluate();
        values[i] = saved - step;
        const double down = evaluate();
        values[i] = saved;
        const double numeric = (up - down) / (2.0 * step);
        return std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), options.floor});
      };
      double rel = rel_error(options.step);
      double step = options.step;
      for (int r = 0; r < options.refinements && rel >= tolerance; ++r) {
        step /= 10.0;
        rel = std::min(rel, rel_error(step));
        ++result.refined;
      }
      ++result.entries_checked;
      if (rel >= result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst = "input" + std::to_string(k) + "[" + std::to_string(i) + "]";
      }
    }
  }
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    inputs[k].zero_grad();
    inputs[k].set_requires_grad(had_flag[k]);
  }
  result.passed = result.max_rel_error < tolerance;
  return result;
}

}  // namespace moseve::ad

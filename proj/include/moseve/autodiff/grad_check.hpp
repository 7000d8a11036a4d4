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
#include <functional>
#include <string>
#include <vector>

#include "moseve/autodiff/tensor.hpp"

namespace moseve::ad {

struct GradCheckOptions {
  double step = 1e-5;
  /// Seeds the fixed random projection that reduces a non-scalar output to a scalar.
  std::uint64_t seed = 0x5eed;
  /// Denominator floor for the relative error, so entries whose true
  /// derivative is essentially zero are judged on absolute error.
  double floor = 1e-4;
  /// An entry that misses the tolerance is retried with steps 10x, 100x, ...
  /// smaller, this many times. A ReLU kink closer than the step to the
  /// evaluation point spoils the central difference only while the step
  /// straddles it; a wrong backward disagrees at every step.
  int refinements = 2;
};

struct GradCheckResult {
  bool passed = false;
  double max_rel_error = 0.0;
  /// "<input>[<flat index>]" of the worst entry.
  std::string worst;
  std::size_t entries_checked = 0;
  /// Retries with a smaller step.
  std::size_t refined = 0;
};

/// Compares reverse-mode gradients of `fragment` against central finite
/// differences for every element of every tensor in `wrt`. The fragment must
/// be deterministic and read the current values of `wrt`. Non-scalar outputs
/// are reduced with a fixed random projection first.
GradCheckResult grad_check(const std::function<Tensor()>& fragment, const std::vector<Tensor>& wrt, double tolerance,
                           const GradCheckOptions& options = {});

}  // namespace moseve::ad

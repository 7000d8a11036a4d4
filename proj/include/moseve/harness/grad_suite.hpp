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

#include "moseve/autodiff/grad_check.hpp"

namespace moseve::harness {

struct GradSuiteEntry {
  std::string name;
  ad::GradCheckResult result;
};

/// Finite-difference checks of every differentiable building block on small
/// random instances (at most 32 points), in 64-bit.
std::vector<GradSuiteEntry> run_grad_suite(std::uint64_t seed, double tolerance = 1e-4);

}  // namespace moseve::harness

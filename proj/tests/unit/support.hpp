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

#include <random>
#include <vector>

#include "moseve/autodiff/tensor.hpp"
#include "moseve/geometry/radar_frame.hpp"

namespace moseve::test {

inline std::vector<geom::RadarPoint> random_cloud(std::mt19937_64& rng, std::size_t n, double extent = 10.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::vector<geom::RadarPoint> cloud(n);
  for (auto& p : cloud) p = {u(rng), u(rng), u(rng), u(rng)};
  return cloud;
}

inline ad::Tensor random_tensor(std::mt19937_64& rng, ad::Shape shape, bool requires_grad = true, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(ad::shape_numel(shape));
  for (auto& x : v) x = g(rng);
  return ad::Tensor::from(std::move(shape), std::move(v), requires_grad);
}

inline std::vector<double> values(const ad::Tensor& t) { return {t.data().begin(), t.data().end()}; }

}  // namespace moseve::test

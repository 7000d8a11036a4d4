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

#include <array>
#include <span>
#include <vector>

#include "moseve/autodiff/tensor.hpp"
#include "moseve/geometry/radar_frame.hpp"

namespace moseve::net {

/// Points labeled static. Throws ArgumentError on an unlabeled frame.
std::vector<geom::RadarPoint> static_points(const geom::RadarFrame& frame);

/// (1/Ns) sum_i |v_hat * y_i / |p_i| - v_i| over static points. `v_hat` is a
/// one-element tensor. An empty static set throws ArgumentError.
ad::Tensor doppler_loss(const ad::Tensor& v_hat, std::span<const geom::RadarPoint> statics);

/// (v - v_hat)^2 for one sample.
ad::Tensor squared_error(const ad::Tensor& v_hat, double v);

/// doppler_loss + squared_error, unweighted.
ad::Tensor eve_loss(const ad::Tensor& v_hat, double v, std::span<const geom::RadarPoint> statics);

/// Class-weighted cross-entropy on [N x 2] logits, averaged over points.
ad::Tensor mos_loss(const ad::Tensor& logits, std::span<const geom::Motion> labels,
                    const std::array<double, 2>& class_weights);

/// Inverse class frequency renormalized to mean 1; {1, 1} when a class is
/// absent.
std::array<double, 2> inverse_frequency_weights(std::size_t static_count, std::size_t moving_count);

}  // namespace moseve::net

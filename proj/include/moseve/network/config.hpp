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
#include <cstddef>
#include <string>
#include <vector>

#include "moseve/kv.hpp"

namespace moseve::net {

/// Four-stage radar encoder: object attention at full resolution, two
/// downsampling stages (the second followed by scenario attention), then
/// cross-frame fusion.
struct BackboneConfig {
  std::vector<std::size_t> stage_rates{1, 4, 4, 1};
  std::vector<std::size_t> stage_widths{32, 64, 128, 128};
  /// Ball radius per stage in meters; the last entry is the cross-frame radius.
  std::vector<double> stage_radii{2.0, 4.0, 8.0, 8.0};
  int k = 16;
  int stride = 2;
  /// Coordinates and residuals are multiplied by this before entering an MLP.
  double coord_scale = 0.1;
  /// Radial velocities are multiplied by this before entering the embedding.
  double velocity_scale = 0.2;

  /// Throws ValidationError for inconsistent settings.
  void validate() const;
  /// Point count at each stage for an `n`-point input.
  std::vector<std::size_t> stage_counts(std::size_t n) const;

  void to_kv(KeyValues& kv, const std::string& prefix) const;
  static BackboneConfig from_kv(const KeyValues& kv, const std::string& prefix);
};

struct EveConfig {
  BackboneConfig backbone;
  std::vector<std::size_t> head_sizes{256, 64, 1};
  /// Frame gap between the two inputs.
  int time_gap = 10;

  void validate() const;
  void to_kv(KeyValues& kv, const std::string& prefix = "eve.") const;
  static EveConfig from_kv(const KeyValues& kv, const std::string& prefix = "eve.");
};

/// Which radial velocity the MOS network sees in its fourth input channel.
enum class VelocityInput { kCompensated, kRaw, kNone };

std::string to_string(VelocityInput v);
VelocityInput velocity_input_from_string(const std::string& s);

struct MosConfig {
  BackboneConfig encoder;
  /// Widths after each upsampling step, coarse to fine; the last is the
  /// per-point segmentation feature width.
  std::vector<std::size_t> decoder_widths{64, 32};
  std::vector<std::size_t> head_sizes{64, 32, 2};
  /// Cross-entropy weights for {static, moving}.
  std::array<double, 2> class_weights{1.0, 1.0};
  VelocityInput velocity_input = VelocityInput::kCompensated;
  int time_gap = 10;

  void validate() const;
  void to_kv(KeyValues& kv, const std::string& prefix = "mos.") const;
  static MosConfig from_kv(const KeyValues& kv, const std::string& prefix = "mos.");
};

}  // namespace moseve::net

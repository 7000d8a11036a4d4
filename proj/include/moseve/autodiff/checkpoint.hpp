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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "moseve/autodiff/optim.hpp"

namespace moseve::ad {

// Binary layout, all integers and doubles little-endian:
//   "MOSEVECK" | u8 version | u32 meta_len | meta bytes (key=value lines)
//   | u32 count | count x ( u32 name_len | name | u32 rank | rank x u64 extent
//   | numel x f64 )

inline constexpr char kCheckpointMagic[8] = {'M', 'O', 'S', 'E', 'V', 'E', 'C', 'K'};
inline constexpr std::uint8_t kCheckpointVersion = 1;

struct NamedArray {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

struct CheckpointData {
  std::map<std::string, std::string> metadata;
  std::vector<NamedArray> arrays;
};

std::vector<std::uint8_t> encode_checkpoint(const CheckpointData& data);
CheckpointData decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void write_checkpoint(const std::filesystem::path& path, const CheckpointData& data);
CheckpointData read_checkpoint(const std::filesystem::path& path);

std::vector<NamedArray> snapshot(const ParameterList& params);
/// Copies arrays into same-named parameters. Every parameter must be present
/// with a matching shape.
void restore(const ParameterList& params, const std::vector<NamedArray>& arrays);

}  // namespace moseve::ad

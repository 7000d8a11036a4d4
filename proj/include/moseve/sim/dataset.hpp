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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "moseve/sim/scene.hpp"

namespace moseve::sim {

// One directory per sequence:
//   points.csv  frame_idx,point_idx,x,y,z,v,label   (label empty if unlabeled)
//   ego.csv     frame_idx,timestamp,ego_v           (ego_v empty if unknown)
//   tracks.csv  track_id,class,extent,frame_idx,x,y,z,vx,vy,vz   (optional)
//   scene.cfg   simulator config as key=value       (optional)
// Numbers are written in shortest round-trip form.

void write_sequence(const LabeledSequence& seq, const std::filesystem::path& dir);
/// Throws ParseError (with file and line) on malformed content. The sequence
/// name is the directory name.
LabeledSequence read_sequence(const std::filesystem::path& dir);

/// Sequence-level split. Names in each part are sorted.
struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  /// Throws ValidationError when a name appears in two parts.
  void check_disjoint() const;
  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

/// Shuffles names with `seed`, then cuts at rounded ratio boundaries. Every
/// part with a nonzero ratio gets at least one sequence.
DatasetSplit split_dataset(const std::vector<std::string>& names, const std::array<double, 3>& ratios,
                           std::uint64_t seed);

/// `split.kv` in the dataset root.
void write_manifest(const std::filesystem::path& root, const DatasetSplit& split);
DatasetSplit read_manifest(const std::filesystem::path& root);

/// Sequence directories (those holding points.csv) under `root`, sorted.
std::vector<std::string> list_sequences(const std::filesystem::path& root);

struct DatasetSpec {
  SceneConfig scene;
  std::size_t sequences = 50;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 0;

  void to_kv(KeyValues& kv) const;
  static DatasetSpec from_kv(const KeyValues& kv);
};

/// Simulates `spec.sequences` sequences named seq_0000, seq_0001, ... with
/// per-sequence seeds derived from `spec.seed`, writes them and the split
/// manifest under `root`.
DatasetSplit simulate_dataset(const DatasetSpec& spec, const std::filesystem::path& root);

}  // namespace moseve::sim

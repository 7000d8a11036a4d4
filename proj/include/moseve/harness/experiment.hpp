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

#include "moseve/baselines/baselines.hpp"
#include "moseve/kv.hpp"
#include "moseve/network/config.hpp"
#include "moseve/sim/dataset.hpp"

namespace moseve::harness {

/// Everything a training or evaluation run depends on. Flat key=value on
/// disk; `eve.*`, `mos.*`, `ransac.*` and `icp.*` keys configure the parts.
struct ExperimentConfig {
  std::string dataset;
  std::size_t point_budget = 512;
  int time_gap = 10;
  std::size_t batch_size = 4;
  int eve_epochs = 60;
  int mos_epochs = 50;
  double learning_rate = 1e-3;
  double decay_ratio = 0.5;
  int eve_decay_period = 20;
  int mos_decay_period = 10;
  double weight_decay = 1e-3;
  std::uint64_t seed = 0;
  std::vector<double> thresholds{0.1, 0.3, 0.5};
  /// 0 means every available pair.
  std::size_t max_train_pairs = 0;
  std::size_t max_eval_pairs = 0;
  /// "inverse_frequency" or "fixed" (uses mos.class_weights as given).
  std::string class_weighting = "inverse_frequency";
  double mos_threshold = base::kDefaultMosThreshold;

  net::EveConfig eve;
  net::MosConfig mos;
  base::RansacConfig ransac;
  base::IcpConfig icp;

  /// Throws ValidationError on inconsistent values.
  void validate() const;
  KeyValues to_kv() const;
  /// Unknown keys are rejected so that typos do not pass silently.
  static ExperimentConfig from_kv(const KeyValues& kv);
  static ExperimentConfig load(const std::filesystem::path& path);
  /// FNV-1a of every setting except the dataset path, as 16 hex digits.
  std::string hash() const;
};

/// Frame indices (t - a, t) inside one loaded sequence.
struct FramePair {
  std::size_t sequence = 0;
  std::size_t prev = 0;
  std::size_t current = 0;
};

struct LoadedSplit {
  std::vector<std::string> names;
  std::vector<sim::LabeledSequence> sequences;
  std::vector<FramePair> pairs;

  const geom::RadarFrame& prev(const FramePair& p) const { return sequences[p.sequence].frames[p.prev]; }
  const geom::RadarFrame& current(const FramePair& p) const { return sequences[p.sequence].frames[p.current]; }
};

/// Which part of the split manifest to load.
enum class SplitPart { kTrain, kVal, kTest };
SplitPart split_part_from_string(const std::string& s);
std::string to_string(SplitPart part);

/// Loads one part of a dataset and enumerates its frame pairs with gap
/// `time_gap`, skipping pairs with an empty frame. `max_pairs` > 0 keeps an
/// evenly spaced subset.
LoadedSplit load_split(const std::filesystem::path& root, SplitPart part, int time_gap, std::size_t max_pairs = 0);

/// Throws ValidationError unless every frame used by a pair carries labels
/// and ground-truth ego speed.
void require_ground_truth(const LoadedSplit& split);

/// A frame pair reduced to the point budget, deterministic in `seed`.
struct SampledPair {
  geom::RadarFrame prev;
  geom::RadarFrame current;
};
SampledPair sample_pair(const LoadedSplit& split, const FramePair& pair, std::size_t budget, std::uint64_t seed);

}  // namespace moseve::harness

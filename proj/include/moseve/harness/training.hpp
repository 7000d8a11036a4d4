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

#include <filesystem>
#include <functional>
#include <vector>

#include "moseve/harness/experiment.hpp"
#include "moseve/harness/metrics.hpp"
#include "moseve/network/models.hpp"

namespace moseve::harness {

struct CurvePoint {
  int epoch = 0;
  double loss = 0.0;
  /// Validation MAE for EVE, validation mIoU for MOS.
  double val_metric = 0.0;
};

struct TrainReport {
  std::vector<CurvePoint> curve;
  int best_epoch = 0;
  double best_val = 0.0;
  /// EVE samples without a static point; they contribute no loss.
  std::size_t skipped = 0;
  std::size_t steps = 0;
  /// Checkpoint metadata: epoch, seed, training sequences, experiment hash.
  KeyValues metadata;
};

using ProgressFn = std::function<void(const CurvePoint&)>;

/// CSV `epoch,loss,val_metric`.
void write_curve(const std::filesystem::path& path, const std::vector<CurvePoint>& curve);

struct EveTraining {
  net::EveNetwork model;
  TrainReport report;
};

/// Adam on the EVE loss over batches of frame pairs, step-decayed learning
/// rate, best-validation-MAE parameters restored at the end.
EveTraining train_eve(const ExperimentConfig& config, const LoadedSplit& train, const LoadedSplit& val,
                      const ProgressFn& progress = {});

/// Validation MAE of an EVE model on fixed per-pair samples.
double eve_validation_mae(const net::EveNetwork& model, const ExperimentConfig& config, const LoadedSplit& split);

struct MosTraining {
  net::MosNetwork model;
  TrainReport report;
};

/// Ego speeds used to compensate a sampled pair: the EVE estimate for both
/// frames when `eve` is given, each frame's ground truth otherwise.
std::pair<double, double> pair_velocities(const net::EveNetwork* eve, const SampledPair& sample, std::uint64_t seed);

/// Class weights for training: inverse frequency over the current frames of
/// the training pairs, or the configured ones.
std::array<double, 2> training_class_weights(const ExperimentConfig& config, const LoadedSplit& train);

/// Trains the MOS network; `eve` null selects ground-truth compensation.
MosTraining train_mos(const ExperimentConfig& config, const LoadedSplit& train, const LoadedSplit& val,
                      const net::EveNetwork* eve, const ProgressFn& progress = {});

/// Pooled validation confusion of a MOS model on fixed per-pair samples.
MosMetrics mos_validation_metrics(const net::MosNetwork& model, const ExperimentConfig& config,
                                  const LoadedSplit& split, const net::EveNetwork* eve);

/// Seed for the fixed evaluation sample of a pair; independent of which other
/// pairs are loaded.
std::uint64_t eval_pair_seed(const ExperimentConfig& config, const LoadedSplit& split, const FramePair& pair,
                             std::uint64_t repeat = 0);

}  // namespace moseve::harness

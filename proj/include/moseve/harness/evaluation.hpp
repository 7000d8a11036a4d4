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

#include <string>

#include "moseve/harness/experiment.hpp"
#include "moseve/harness/metrics.hpp"
#include "moseve/network/models.hpp"

namespace moseve::harness {

struct EvalModels {
  const net::EveNetwork* eve = nullptr;
  const net::MosNetwork* mos = nullptr;
  /// Compensate MOS inputs with ground-truth ego speed instead of the EVE
  /// estimate. Implied when no EVE model is given.
  bool oracle_velocity = false;
};

/// Throws ValidationError when a checkpoint was trained on any sequence of
/// `split`.
void check_no_overlap(const KeyValues& checkpoint_metadata, const LoadedSplit& split);

/// Runs the models on every pair of `split` (fixed samples per repeat) and
/// aggregates MOS and EVE metrics.
MetricsReport evaluate(const ExperimentConfig& config, const LoadedSplit& split, const EvalModels& models,
                       std::uint64_t repeat = 0);
/// `repeats` runs with different sampling seeds, pooled.
MetricsReport evaluate_repeated(const ExperimentConfig& config, const LoadedSplit& split, const EvalModels& models,
                                std::size_t repeats);

enum class BaselineKind { kRansac, kIcp, kThreshold };
BaselineKind baseline_kind_from_string(const std::string& s);
std::string to_string(BaselineKind kind);

/// Ego speed used by the threshold baseline for compensation.
enum class BaselineVelocity { kOracle, kRansac };
BaselineVelocity baseline_velocity_from_string(const std::string& s);

MetricsReport run_baseline(BaselineKind kind, const ExperimentConfig& config, const LoadedSplit& split,
                           BaselineVelocity velocity = BaselineVelocity::kRansac, std::uint64_t repeat = 0);
MetricsReport run_baseline_repeated(BaselineKind kind, const ExperimentConfig& config, const LoadedSplit& split,
                                    BaselineVelocity velocity, std::size_t repeats);

}  // namespace moseve::harness

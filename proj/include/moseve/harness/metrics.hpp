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
#include <span>
#include <string>
#include <vector>

#include "moseve/geometry/radar_frame.hpp"
#include "moseve/kv.hpp"

namespace moseve::harness {

/// Two-class confusion counts, indexed [truth][prediction].
struct Confusion {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  void add(std::span<const geom::Motion> predicted, std::span<const geom::Motion> truth);
  std::size_t total() const;
};

/// Percentages. A class absent from both truth and prediction scores 100.
struct ClassScores {
  double iou = 0.0;
  double f1 = 0.0;
  /// Recall of the class.
  double acc = 0.0;
};

struct MosMetrics {
  std::array<ClassScores, 2> per_class{};  // {static, moving}
  double miou = 0.0;
  double mf1 = 0.0;
  double acc_macro = 0.0;
  double acc_overall = 0.0;
  std::size_t points = 0;
  Confusion confusion;
};

MosMetrics mos_metrics_from(const Confusion& confusion);
/// Throws ArgumentError on empty or unequal-length input.
MosMetrics compute_mos_metrics(std::span<const geom::Motion> predicted, std::span<const geom::Motion> truth);

struct EveMetrics {
  double mae = 0.0;
  double mse = 0.0;
  std::vector<double> thresholds;
  /// Fraction of estimates with |error| < threshold, per threshold.
  std::vector<double> precision;
  std::size_t samples = 0;
  /// estimate - truth per sample.
  std::vector<double> errors;
};

EveMetrics compute_eve_metrics(std::span<const double> estimates, std::span<const double> truths,
                               std::span<const double> thresholds);

/// One evaluation run. Either part may be absent.
struct MetricsReport {
  std::string title;
  bool has_mos = false;
  MosMetrics mos;
  bool has_eve = false;
  EveMetrics eve;
  std::size_t pairs = 0;
  std::string config_hash;
  /// Extra counters (skipped samples, degenerate scenes, ...), written as is.
  KeyValues counters;
};

/// IoU = F1 / (2 - F1) per class within `tolerance` (in percent units), and
/// every percentage within [0, 100].
bool report_identities_hold(const MetricsReport& report, double tolerance = 1e-9);

KeyValues report_to_kv(const MetricsReport& report);
std::string report_to_text(const MetricsReport& report);
/// Writes report.txt and report.kv into `dir`. Throws ContractError if the
/// metric identities do not hold.
void write_report(const MetricsReport& report, const std::string& dir);

/// Pools the samples of several runs (confusion counts, velocity errors,
/// counters) and recomputes the metrics, so the identities still hold.
MetricsReport pool_reports(const std::vector<MetricsReport>& reports);

}  // namespace moseve::harness

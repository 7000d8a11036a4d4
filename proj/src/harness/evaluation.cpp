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

#include "moseve/harness/evaluation.hpp"

#include <set>
#include <sstream>

#include "moseve/baselines/baselines.hpp"
#include "moseve/errors.hpp"
#include "moseve/geometry/velocity.hpp"
#include "moseve/harness/training.hpp"
#include "moseve/network/pipeline.hpp"

namespace moseve::harness {

void check_no_overlap(const KeyValues& checkpoint_metadata, const LoadedSplit& split) {
  std::set<std::string> trained;
  std::istringstream in(checkpoint_metadata.get_string("train_sequences", ""));
  for (std::string name; std::getline(in, name, ',');) trained.insert(name);
  for (const auto& name : split.names) {
    if (trained.count(name)) {
      throw ValidationError("refusing to evaluate: sequence '" + name + "' was used to train the checkpoint");
    }
  }
}

MetricsReport evaluate(const ExperimentConfig& config, const LoadedSplit& split, const EvalModels& models,
                       std::uint64_t repeat) {
  if (!models.eve && !models.mos) throw ValidationError("evaluate: no model given");
  require_ground_truth(split);
  MetricsReport report;
  report.title = std::string("evaluation:") + (models.eve ? " eve" : "") + (models.mos ? " mos" : "") +
                 (models.mos && (models.oracle_velocity || !models.eve) ? " (oracle velocity)" : "");
  report.config_hash = config.hash();
  report.has_eve = models.eve != nullptr;
  report.has_mos = models.mos != nullptr;
  std::vector<double> estimates, truths;
  Confusion confusion;
  std::size_t dropped = 0;
  for (const auto& pair : split.pairs) {
    const std::uint64_t seed = eval_pair_seed(config, split, pair, repeat);
    const SampledPair s = sample_pair(split, pair, config.point_budget, seed);
    double v_hat = 0.0;
    if (models.eve) {
      v_hat = models.eve->predict(s.current, s.prev, mix_seed({seed, 0xe}));
      estimates.push_back(v_hat);
      truths.push_back(*s.current.ego_v);
    }
    if (models.mos) {
      const bool oracle = models.oracle_velocity || !models.eve;
      const double v_t = oracle ? *s.current.ego_v : v_hat;
      const double v_prev = oracle ? *s.prev.ego_v : v_hat;
      const auto result = net::predict_with_velocity(*models.mos, s.current, s.prev, v_t, v_prev, mix_seed({seed, 0xf}));
      dropped += result.dropped;
      confusion.add(result.labels, *s.current.labels);
    }
    ++report.pairs;
  }
  if (report.has_eve) report.eve = compute_eve_metrics(estimates, truths, config.thresholds);
  if (report.has_mos) {
    report.mos = mos_metrics_from(confusion);
    report.counters.set("dropped_points", dropped);
  }
  return report;
}

MetricsReport evaluate_repeated(const ExperimentConfig& config, const LoadedSplit& split, const EvalModels& models,
                                std::size_t repeats) {
  if (repeats < 1) throw ValidationError("repeats must be at least 1");
  if (repeats == 1) return evaluate(config, split, models, 0);
  std::vector<MetricsReport> runs;
  for (std::size_t r = 0; r < repeats; ++r) runs.push_back(evaluate(config, split, models, r));
  return pool_reports(runs);
}

BaselineKind baseline_kind_from_string(const std::string& s) {
  if (s == "ransac") return BaselineKind::kRansac;
  if (s == "icp") return BaselineKind::kIcp;
  if (s == "threshold") return BaselineKind::kThreshold;
  throw ValidationError("unknown baseline '" + s + "' (expected ransac, icp or threshold)");
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kRansac:
      return "ransac";
    case BaselineKind::kIcp:
      return "icp";
    case BaselineKind::kThreshold:
      return "threshold";
  }
  return "ransac";
}

BaselineVelocity baseline_velocity_from_string(const std::string& s) {
  if (s == "oracle") return BaselineVelocity::kOracle;
  if (s == "ransac") return BaselineVelocity::kRansac;
  throw ValidationError("unknown velocity source '" + s + "' (expected oracle or ransac)");
}

MetricsReport run_baseline(BaselineKind kind, const ExperimentConfig& config, const LoadedSplit& split,
                           BaselineVelocity velocity, std::uint64_t repeat) {
  require_ground_truth(split);
  MetricsReport report;
  report.title = "baseline: " + to_string(kind);
  if (kind == BaselineKind::kThreshold) {
    report.title += velocity == BaselineVelocity::kOracle ? " (oracle velocity)" : " (ransac velocity)";
  }
  report.config_hash = config.hash();
  report.has_eve = kind != BaselineKind::kThreshold;
  report.has_mos = kind == BaselineKind::kThreshold;
  std::vector<double> estimates, truths;
  Confusion confusion;
  std::size_t degenerate = 0, unconverged = 0, dropped = 0;

  auto robust_speed = [&](const geom::RadarFrame& frame, std::uint64_t seed) {
    base::RansacConfig rc = config.ransac;
    rc.seed = mix_seed({config.ransac.seed, seed});
    try {
      return base::ransac_eve(frame, rc);
    } catch (const DegenerateSceneError&) {
      ++degenerate;
      return base::least_squares_eve(frame);
    }
  };

  for (const auto& pair : split.pairs) {
    const std::uint64_t seed = eval_pair_seed(config, split, pair, repeat);
    const SampledPair s = sample_pair(split, pair, config.point_budget, seed);
    switch (kind) {
      case BaselineKind::kRansac:
        estimates.push_back(robust_speed(s.current, seed));
        truths.push_back(*s.current.ego_v);
        break;
      case BaselineKind::kIcp: {
        const auto r = base::icp_velocity(s.prev, s.current, s.current.timestamp - s.prev.timestamp, config.icp);
        unconverged += !r.converged;
        estimates.push_back(r.velocity);
        truths.push_back(*s.current.ego_v);
        break;
      }
      case BaselineKind::kThreshold: {
        const double v = velocity == BaselineVelocity::kOracle ? *s.current.ego_v : robust_speed(s.current, seed);
        const auto comp = geom::velocity_compensate(v, s.current);
        dropped += comp.dropped;
        const auto labels = net::expand_labels(base::threshold_mos(comp.frame, config.mos_threshold), comp.kept,
                                               s.current.size());
        confusion.add(labels, *s.current.labels);
        break;
      }
    }
    ++report.pairs;
  }
  if (report.has_eve) report.eve = compute_eve_metrics(estimates, truths, config.thresholds);
  if (report.has_mos) {
    report.mos = mos_metrics_from(confusion);
    report.counters.set("dropped_points", dropped);
  }
  if (kind != BaselineKind::kIcp && !(kind == BaselineKind::kThreshold && velocity == BaselineVelocity::kOracle)) {
    report.counters.set("ransac_degenerate", degenerate);
  }
  if (kind == BaselineKind::kIcp) report.counters.set("icp_unconverged", unconverged);
  return report;
}

MetricsReport run_baseline_repeated(BaselineKind kind, const ExperimentConfig& config, const LoadedSplit& split,
                                    BaselineVelocity velocity, std::size_t repeats) {
  if (repeats < 1) throw ValidationError("repeats must be at least 1");
  if (repeats == 1) return run_baseline(kind, config, split, velocity, 0);
  std::vector<MetricsReport> runs;
  for (std::size_t r = 0; r < repeats; ++r) runs.push_back(run_baseline(kind, config, split, velocity, r));
  return pool_reports(runs);
}

}  // namespace moseve::harness

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

#include "moseve/harness/training.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "moseve/autodiff/checkpoint.hpp"
#include "moseve/autodiff/ops.hpp"
#include "moseve/errors.hpp"
#include "moseve/network/losses.hpp"
#include "moseve/network/pipeline.hpp"

namespace moseve::harness {

namespace {

constexpr std::uint64_t kInitTag = 0x1417;
constexpr std::uint64_t kShuffleTag = 0x5f;
constexpr std::uint64_t kSampleTag = 0x5a;
constexpr std::uint64_t kForwardTag = 0xf0;

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
  return order;
}

std::uint64_t train_pair_seed(const ExperimentConfig& config, const LoadedSplit& split, const FramePair& pair,
                              int epoch) {
  return mix_seed({config.seed, kSampleTag, static_cast<std::uint64_t>(epoch), fnv1a(split.names[pair.sequence]),
                   pair.current});
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out;
}

TrainReport start_report(const ExperimentConfig& config, const LoadedSplit& train) {
  TrainReport r;
  r.best_val = std::numeric_limits<double>::quiet_NaN();
  r.metadata.set("seed", std::to_string(config.seed));
  r.metadata.set("train_sequences", join_names(train.names));
  r.metadata.set("experiment_hash", config.hash());
  return r;
}

void finish_report(TrainReport& r) {
  r.metadata.set("epoch", r.best_epoch);
  r.metadata.set("val_metric", r.best_val);
  r.metadata.set("skipped", r.skipped);
  r.metadata.set("steps", r.steps);
}

ad::AdamOptions adam_options(const ExperimentConfig& config) {
  ad::AdamOptions o;
  o.learning_rate = config.learning_rate;
  o.weight_decay = config.weight_decay;
  return o;
}

}  // namespace

void write_curve(const std::filesystem::path& path, const std::vector<CurvePoint>& curve) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "epoch,loss,val_metric\n";
  for (const auto& c : curve) out << c.epoch << ',' << format_double(c.loss) << ',' << format_double(c.val_metric) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::uint64_t eval_pair_seed(const ExperimentConfig& config, const LoadedSplit& split, const FramePair& pair,
                             std::uint64_t repeat) {
  return mix_seed({config.seed, 0xe7a1, repeat, fnv1a(split.names[pair.sequence]), pair.current});
}

double eve_validation_mae(const net::EveNetwork& model, const ExperimentConfig& config, const LoadedSplit& split) {
  double total = 0.0;
  for (const auto& pair : split.pairs) {
    const std::uint64_t seed = eval_pair_seed(config, split, pair);
    const SampledPair s = sample_pair(split, pair, config.point_budget, seed);
    total += std::abs(model.predict(s.current, s.prev, mix_seed({seed, kForwardTag})) - *split.current(pair).ego_v);
  }
  return total / static_cast<double>(split.pairs.size());
}

EveTraining train_eve(const ExperimentConfig& config, const LoadedSplit& train, const LoadedSplit& val,
                      const ProgressFn& progress) {
  config.validate();
  require_ground_truth(train);
  require_ground_truth(val);
  net::EveConfig net_config = config.eve;
  net_config.time_gap = config.time_gap;
  EveTraining out{net::EveNetwork(net_config, mix_seed({config.seed, kInitTag})), start_report(config, train)};
  const auto params = out.model.parameters();
  ad::AdamState adam(params, adam_options(config));
  const ad::LrSchedule schedule{config.learning_rate, config.decay_ratio, config.eve_decay_period};
  std::vector<ad::NamedArray> best;

  struct Item {
    SampledPair sample;
    std::vector<geom::RadarPoint> statics;
    double truth;
    std::uint64_t seed;
  };

  for (int epoch = 0; epoch < config.eve_epochs; ++epoch) {
    adam.set_learning_rate(schedule.rate(epoch));
    const auto order = epoch_order(train.pairs.size(), mix_seed({config.seed, kShuffleTag, std::uint64_t(epoch)}));
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<Item> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        const FramePair& pair = train.pairs[order[i]];
        const std::uint64_t seed = train_pair_seed(config, train, pair, epoch);
        Item item{sample_pair(train, pair, config.point_budget, seed), {}, *train.current(pair).ego_v,
                  mix_seed({seed, kForwardTag})};
        item.statics = net::static_points(item.sample.current);
        if (item.statics.empty()) {
          ++out.report.skipped;
          continue;
        }
        batch.push_back(std::move(item));
      }
      if (batch.empty()) continue;
      ad::zero_grads(params);
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (const auto& item : batch) {
        const ad::Tensor v_hat = out.model.forward(item.sample.current, item.sample.prev, item.seed);
        const ad::Tensor loss = net::eve_loss(v_hat, item.truth, item.statics);
        loss_sum += loss.item();
        ++loss_count;
        ad::scale(loss, inv).backward();
      }
      ad::adam_step(params, adam);
      ++out.report.steps;
    }
    const CurvePoint point{epoch, loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0,
                           eve_validation_mae(out.model, config, val)};
    out.report.curve.push_back(point);
    if (best.empty() || point.val_metric < out.report.best_val) {
      out.report.best_val = point.val_metric;
      out.report.best_epoch = epoch;
      best = ad::snapshot(params);
    }
    if (progress) progress(point);
  }
  ad::restore(params, best);
  finish_report(out.report);
  return out;
}

std::pair<double, double> pair_velocities(const net::EveNetwork* eve, const SampledPair& sample, std::uint64_t seed) {
  if (eve) {
    const double v = eve->predict(sample.current, sample.prev, seed);
    return {v, v};
  }
  if (!sample.current.ego_v || !sample.prev.ego_v) {
    throw ValidationError("ground-truth compensation needs ego velocity on both frames");
  }
  return {*sample.current.ego_v, *sample.prev.ego_v};
}

std::array<double, 2> training_class_weights(const ExperimentConfig& config, const LoadedSplit& train) {
  if (config.class_weighting == "fixed") return config.mos.class_weights;
  std::size_t counts[2] = {0, 0};
  for (const auto& pair : train.pairs) {
    const auto& labels = train.current(pair).labels;
    if (!labels) throw ValidationError("class weighting needs labeled frames");
    for (auto l : *labels) ++counts[static_cast<std::size_t>(l)];
  }
  return net::inverse_frequency_weights(counts[0], counts[1]);
}

MosMetrics mos_validation_metrics(const net::MosNetwork& model, const ExperimentConfig& config,
                                  const LoadedSplit& split, const net::EveNetwork* eve) {
  Confusion confusion;
  for (const auto& pair : split.pairs) {
    const std::uint64_t seed = eval_pair_seed(config, split, pair);
    const SampledPair s = sample_pair(split, pair, config.point_budget, seed);
    const auto [v_t, v_prev] = pair_velocities(eve, s, mix_seed({seed, 0xe}));
    const auto result = net::predict_with_velocity(model, s.current, s.prev, v_t, v_prev, mix_seed({seed, 0xf}));
    confusion.add(result.labels, *s.current.labels);
  }
  return mos_metrics_from(confusion);
}

MosTraining train_mos(const ExperimentConfig& config, const LoadedSplit& train, const LoadedSplit& val,
                      const net::EveNetwork* eve, const ProgressFn& progress) {
  config.validate();
  require_ground_truth(train);
  require_ground_truth(val);
  net::MosConfig net_config = config.mos;
  net_config.time_gap = config.time_gap;
  net_config.class_weights = training_class_weights(config, train);
  MosTraining out{net::MosNetwork(net_config, mix_seed({config.seed, kInitTag})), start_report(config, train)};
  out.report.metadata.set("velocity_source", eve ? "eve" : "oracle");
  const auto params = out.model.parameters();
  ad::AdamState adam(params, adam_options(config));
  const ad::LrSchedule schedule{config.learning_rate, config.decay_ratio, config.mos_decay_period};
  std::vector<ad::NamedArray> best;

  struct Item {
    net::MosInput current;
    net::MosInput prev;
    std::uint64_t seed;
  };

  for (int epoch = 0; epoch < config.mos_epochs; ++epoch) {
    adam.set_learning_rate(schedule.rate(epoch));
    const auto order = epoch_order(train.pairs.size(), mix_seed({config.seed, kShuffleTag, std::uint64_t(epoch)}));
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<Item> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        const FramePair& pair = train.pairs[order[i]];
        const std::uint64_t seed = train_pair_seed(config, train, pair, epoch);
        const SampledPair s = sample_pair(train, pair, config.point_budget, seed);
        const auto [v_t, v_prev] = pair_velocities(eve, s, mix_seed({seed, 0xe}));
        Item item{net::prepare_mos_frame(s.current, v_t, net_config.velocity_input),
                  net::prepare_mos_frame(s.prev, v_prev, net_config.velocity_input), mix_seed({seed, kForwardTag})};
        if (item.current.frame.empty() || item.prev.frame.empty()) {
          ++out.report.skipped;
          continue;
        }
        batch.push_back(std::move(item));
      }
      if (batch.empty()) continue;
      ad::zero_grads(params);
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (const auto& item : batch) {
        const ad::Tensor logits = out.model.forward(item.current.frame, item.prev.frame, item.seed);
        const ad::Tensor loss = net::mos_loss(logits, *item.current.frame.labels, net_config.class_weights);
        loss_sum += loss.item();
        ++loss_count;
        ad::scale(loss, inv).backward();
      }
      ad::adam_step(params, adam);
      ++out.report.steps;
    }
    const CurvePoint point{epoch, loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0,
                           mos_validation_metrics(out.model, config, val, eve).miou};
    out.report.curve.push_back(point);
    if (best.empty() || point.val_metric > out.report.best_val) {
      out.report.best_val = point.val_metric;
      out.report.best_epoch = epoch;
      best = ad::snapshot(params);
    }
    if (progress) progress(point);
  }
  ad::restore(params, best);
  finish_report(out.report);
  return out;
}

}  // namespace moseve::harness

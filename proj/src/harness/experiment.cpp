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

#include "moseve/harness/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "moseve/errors.hpp"
#include "moseve/geometry/sampling.hpp"

namespace moseve::harness {

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("experiment: " + what); };
  if (point_budget < 1) fail("point budget must be positive");
  if (time_gap < 1) fail("time gap must be at least one frame");
  if (batch_size < 1) fail("batch size must be positive");
  if (eve_epochs < 1 || mos_epochs < 1) fail("epoch counts must be positive");
  if (!(learning_rate > 0.0)) fail("learning rate must be positive");
  if (!(decay_ratio > 0.0 && decay_ratio <= 1.0)) fail("decay ratio must lie in (0, 1]");
  if (eve_decay_period < 1 || mos_decay_period < 1) fail("decay periods must be positive");
  if (!(weight_decay >= 0.0)) fail("weight decay must be non-negative");
  if (thresholds.empty()) fail("at least one precision threshold required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0)) fail("precision thresholds must be positive");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) fail("precision thresholds must be ascending");
  }
  if (class_weighting != "inverse_frequency" && class_weighting != "fixed") {
    fail("class_weighting must be inverse_frequency or fixed");
  }
  if (!(mos_threshold >= 0.0)) fail("mos_threshold must be non-negative");
  eve.validate();
  mos.validate();
  ransac.validate();
  icp.validate();
}

KeyValues ExperimentConfig::to_kv() const {
  KeyValues kv;
  kv.set("dataset", dataset);
  kv.set("point_budget", point_budget);
  kv.set("time_gap", time_gap);
  kv.set("batch_size", batch_size);
  kv.set("eve_epochs", eve_epochs);
  kv.set("mos_epochs", mos_epochs);
  kv.set("learning_rate", learning_rate);
  kv.set("decay_ratio", decay_ratio);
  kv.set("eve_decay_period", eve_decay_period);
  kv.set("mos_decay_period", mos_decay_period);
  kv.set("weight_decay", weight_decay);
  kv.set("seed", std::to_string(seed));
  kv.set("thresholds", thresholds);
  kv.set("max_train_pairs", max_train_pairs);
  kv.set("max_eval_pairs", max_eval_pairs);
  kv.set("class_weighting", class_weighting);
  kv.set("mos_threshold", mos_threshold);
  eve.to_kv(kv);
  mos.to_kv(kv);
  kv.set("ransac.iterations", ransac.iterations);
  kv.set("ransac.threshold", ransac.threshold);
  kv.set("ransac.min_inlier_ratio", ransac.min_inlier_ratio);
  kv.set("ransac.seed", std::to_string(ransac.seed));
  kv.set("icp.max_iterations", icp.max_iterations);
  kv.set("icp.tolerance", icp.tolerance);
  kv.set("icp.max_correspondence", icp.max_correspondence);
  return kv;
}

namespace {

std::uint64_t get_u64(const KeyValues& kv, const std::string& key, std::uint64_t fallback) {
  if (!kv.has(key)) return fallback;
  const std::string& s = kv.get(key);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("key '" + key + "': expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::size_t get_count(const KeyValues& kv, const std::string& key, std::size_t fallback) {
  const auto v = kv.get_int(key, static_cast<std::int64_t>(fallback));
  if (v < 0) throw ValidationError("key '" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_kv(const KeyValues& kv) {
  const KeyValues known = ExperimentConfig{}.to_kv();
  for (const auto& [key, value] : kv.entries()) {
    if (!known.has(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  c.dataset = kv.get_string("dataset", c.dataset);
  c.point_budget = get_count(kv, "point_budget", c.point_budget);
  c.time_gap = static_cast<int>(kv.get_int("time_gap", c.time_gap));
  c.batch_size = get_count(kv, "batch_size", c.batch_size);
  c.eve_epochs = static_cast<int>(kv.get_int("eve_epochs", c.eve_epochs));
  c.mos_epochs = static_cast<int>(kv.get_int("mos_epochs", c.mos_epochs));
  c.learning_rate = kv.get_double("learning_rate", c.learning_rate);
  c.decay_ratio = kv.get_double("decay_ratio", c.decay_ratio);
  c.eve_decay_period = static_cast<int>(kv.get_int("eve_decay_period", c.eve_decay_period));
  c.mos_decay_period = static_cast<int>(kv.get_int("mos_decay_period", c.mos_decay_period));
  c.weight_decay = kv.get_double("weight_decay", c.weight_decay);
  c.seed = get_u64(kv, "seed", c.seed);
  c.thresholds = kv.get_doubles("thresholds", c.thresholds);
  c.max_train_pairs = get_count(kv, "max_train_pairs", c.max_train_pairs);
  c.max_eval_pairs = get_count(kv, "max_eval_pairs", c.max_eval_pairs);
  c.class_weighting = kv.get_string("class_weighting", c.class_weighting);
  c.mos_threshold = kv.get_double("mos_threshold", c.mos_threshold);
  c.eve = net::EveConfig::from_kv(kv);
  c.mos = net::MosConfig::from_kv(kv);
  c.ransac.iterations = static_cast<int>(kv.get_int("ransac.iterations", c.ransac.iterations));
  c.ransac.threshold = kv.get_double("ransac.threshold", c.ransac.threshold);
  c.ransac.min_inlier_ratio = kv.get_double("ransac.min_inlier_ratio", c.ransac.min_inlier_ratio);
  c.ransac.seed = get_u64(kv, "ransac.seed", c.ransac.seed);
  c.icp.max_iterations = static_cast<int>(kv.get_int("icp.max_iterations", c.icp.max_iterations));
  c.icp.tolerance = kv.get_double("icp.tolerance", c.icp.tolerance);
  c.icp.max_correspondence = kv.get_double("icp.max_correspondence", c.icp.max_correspondence);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) { return from_kv(KeyValues::load(path)); }

std::string ExperimentConfig::hash() const {
  KeyValues kv = to_kv();
  kv.set("dataset", "");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(kv.to_string())));
  return buf;
}

SplitPart split_part_from_string(const std::string& s) {
  if (s == "train") return SplitPart::kTrain;
  if (s == "val") return SplitPart::kVal;
  if (s == "test") return SplitPart::kTest;
  throw ValidationError("unknown split '" + s + "' (expected train, val or test)");
}

std::string to_string(SplitPart part) {
  switch (part) {
    case SplitPart::kTrain:
      return "train";
    case SplitPart::kVal:
      return "val";
    case SplitPart::kTest:
      return "test";
  }
  return "test";
}

LoadedSplit load_split(const std::filesystem::path& root, SplitPart part, int time_gap, std::size_t max_pairs) {
  if (time_gap < 1) throw ValidationError("time gap must be at least one frame");
  const sim::DatasetSplit manifest = sim::read_manifest(root);
  LoadedSplit out;
  out.names = part == SplitPart::kTrain ? manifest.train : part == SplitPart::kVal ? manifest.val : manifest.test;
  if (out.names.empty()) throw ValidationError("split '" + to_string(part) + "' of " + root.string() + " is empty");
  const auto gap = static_cast<std::size_t>(time_gap);
  for (std::size_t s = 0; s < out.names.size(); ++s) {
    out.sequences.push_back(sim::read_sequence(root / out.names[s]));
    const auto& frames = out.sequences.back().frames;
    for (std::size_t t = gap; t < frames.size(); ++t) {
      if (frames[t].empty() || frames[t - gap].empty()) continue;
      out.pairs.push_back({s, t - gap, t});
    }
  }
  if (out.pairs.empty()) {
    throw ValidationError("split '" + to_string(part) + "' has no frame pair with gap " + std::to_string(time_gap));
  }
  if (max_pairs > 0 && out.pairs.size() > max_pairs) {
    std::vector<FramePair> kept;
    for (std::size_t i = 0; i < max_pairs; ++i) kept.push_back(out.pairs[i * out.pairs.size() / max_pairs]);
    out.pairs = std::move(kept);
  }
  return out;
}

void require_ground_truth(const LoadedSplit& split) {
  for (const auto& p : split.pairs) {
    for (const auto* f : {&split.prev(p), &split.current(p)}) {
      if (!f->labels || !f->ego_v) {
        throw ValidationError("sequence '" + split.names[p.sequence] +
                              "' has frames without labels or ego velocity; training needs both");
      }
    }
  }
}

SampledPair sample_pair(const LoadedSplit& split, const FramePair& pair, std::size_t budget, std::uint64_t seed) {
  return {geom::random_subsample(split.prev(pair), budget, mix_seed({seed, 0})),
          geom::random_subsample(split.current(pair), budget, mix_seed({seed, 1}))};
}

}  // namespace moseve::harness

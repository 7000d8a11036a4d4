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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   moseve_acceptance            all criteria
//   moseve_acceptance 3 5        only criteria 3 and 5
//
// Criteria 6 and 7 train the full networks and take tens of minutes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "moseve/attention/attention.hpp"
#include "moseve/autodiff/ops.hpp"
#include "moseve/baselines/baselines.hpp"
#include "moseve/errors.hpp"
#include "moseve/geometry/sampling.hpp"
#include "moseve/geometry/velocity.hpp"
#include "moseve/harness/evaluation.hpp"
#include "moseve/harness/grad_suite.hpp"
#include "moseve/harness/training.hpp"
#include "moseve/network/losses.hpp"
#include "moseve/sim/dataset.hpp"

namespace fs = std::filesystem;
using namespace moseve;
using ad::Tensor;
using geom::Motion;
using geom::RadarFrame;
using geom::RadarPoint;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

fs::path work_dir() {
  const fs::path dir = fs::current_path() / "acceptance_work";
  fs::create_directories(dir);
  return dir;
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
  return a.shape() == b.shape() && std::memcmp(a.data().data(), b.data().data(), 8 * a.numel()) == 0;
}

std::vector<RadarPoint> uniform_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> x(-10, 10), y(-10, 10), z(-2, 2), v(-5, 5);
  std::vector<RadarPoint> out(n);
  for (auto& p : out) p = {x(rng), y(rng), z(rng), v(rng)};
  return out;
}

// Brute-force neighbour order: (distance, index).
std::vector<std::size_t> sort_oracle(const RadarPoint& q, const std::vector<RadarPoint>& cloud) {
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return geom::squared_distance(q, cloud[a]) < geom::squared_distance(q, cloud[b]);
  });
  return order;
}

// ---------------------------------------------------------------------------
// 1. Sign convention.

Outcome sign_keystone() {
  const auto t0 = Clock::now();
  double max_loss = 0.0, max_residual = 0.0;
  std::size_t frames = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sim::SceneConfig c;
    c.moving_count = 0;
    c.velocity_noise = 0.0;
    c.frames = 10;
    c.seed = seed;
    for (const auto& f : sim::simulate_sequence(c).frames) {
      if (f.empty()) continue;
      ++frames;
      const Tensor v = Tensor::from({1}, {*f.ego_v});
      max_loss = std::max(max_loss, net::doppler_loss(v, f.points).item());
      for (const auto& p : geom::velocity_compensate(*f.ego_v, f).frame.points) {
        max_residual = std::max(max_residual, std::abs(p.v));
      }
    }
  }
  // Forward motion: a static return dead ahead closes in at the ego speed.
  const bool ahead = geom::radial_projection(5.0, {0, 20, 0, 0}) == 5.0;
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = max_loss < 1e-9 && max_residual < 1e-9 && ahead && frames > 0 && secs < 1.0;
  o.detail = std::to_string(frames) + " frames, max Doppler loss " + fmt("%.2e", max_loss) + ", max |v'| " +
             fmt("%.2e", max_residual) + ", " + fmt("%.2f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 2. Gradient suite.

Outcome grad_suite() {
  const auto t0 = Clock::now();
  const auto entries = harness::run_grad_suite(1, 1e-4);
  const double secs = seconds_since(t0);
  std::size_t failed = 0;
  double worst = 0.0;
  std::string failures;
  for (const auto& e : entries) {
    worst = std::max(worst, e.result.max_rel_error);
    if (!e.result.passed) {
      ++failed;
      failures += " " + e.name;
    }
  }
  Outcome o;
  o.pass = failed == 0 && !entries.empty() && secs < 120.0;
  o.detail = std::to_string(entries.size()) + " checks, " + std::to_string(failed) + " failed" + failures +
             ", max rel err " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 3. Attention invariants.

// 1/8 m grid coordinates: differences and whole-meter shifts are exact.
std::vector<RadarPoint> grid_cloud(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> u(-64, 64);
  std::vector<RadarPoint> out(n);
  for (auto& p : out) p = {u(rng) / 8.0, u(rng) / 8.0, u(rng) / 32.0, u(rng) / 16.0};
  return out;
}

std::vector<RadarPoint> shifted(std::vector<RadarPoint> cloud, double dx, double dy, double dz) {
  for (auto& p : cloud) {
    p.x += dx;
    p.y += dy;
    p.z += dz;
  }
  return cloud;
}

Tensor features(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n * d);
  for (double& x : v) x = u(rng);
  return Tensor::from({n, d}, std::move(v));
}

double worst_weight_sum(const attn::AttentionTrace& trace) {
  const Tensor sums = ad::group_sum(trace.weights, trace.k);
  double worst = 0.0;
  for (std::size_t i = 0; i < sums.numel(); ++i) worst = std::max(worst, std::abs(sums[i] - 1.0));
  return worst;
}

Outcome attention_invariants() {
  double worst_sum = 0.0;
  std::size_t instances = 0, translation_ok = 0, singleton_ok = 0, singleton_total = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng prng(seed);
    std::mt19937_64 gen(seed);
    const auto params = attn::AttentionLayerParams::create(6, 6, attn::EncoderDepth::kShallow, 0.25, prng);
    const auto pts = grid_cloud(gen, 64), prev = grid_cloud(gen, 64);
    const Tensor f = features(gen, 64, 6), fp = features(gen, 64, 6);
    const auto pts_m = shifted(pts, 17.0, -5.0, 2.0), prev_m = shifted(prev, 17.0, -5.0, 2.0);

    attn::AttentionTrace trace;
    const Tensor a = attn::object_attention(params, pts, f, 3.0, 16, seed, &trace);
    worst_sum = std::max(worst_sum, worst_weight_sum(trace));
    const Tensor b = attn::scenario_attention(params, pts, f, 2, 16, &trace);
    worst_sum = std::max(worst_sum, worst_weight_sum(trace));
    const Tensor c = attn::cross_attention(params, f, pts, fp, prev, 2.0, 16, seed, &trace);
    worst_sum = std::max(worst_sum, worst_weight_sum(trace));

    instances += 3;
    translation_ok += bitwise_equal(a, attn::object_attention(params, pts_m, f, 3.0, 16, seed));
    translation_ok += bitwise_equal(b, attn::scenario_attention(params, pts_m, f, 2, 16));
    translation_ok += bitwise_equal(c, attn::cross_attention(params, f, pts_m, fp, prev_m, 2.0, 16, seed));

    // K = 1 with the point itself: y_i = gamma(x_i) + w_ii.
    std::vector<geom::NeighborSet> self(64);
    for (std::size_t i = 0; i < 64; ++i) self[i] = {i, {i}, geom::NeighborSource::kSameFrame};
    const Tensor y = attn::vector_self_attention(params, f, pts, self);
    const Tensor expected = ad::add(params.gamma.forward(f), params.position.forward(Tensor::zeros({64, 3})));
    ++singleton_total;
    singleton_ok += bitwise_equal(y, expected);
  }
  Outcome o;
  o.pass = worst_sum < 1e-12 && translation_ok == instances && singleton_ok == singleton_total;
  o.detail = "max |sum w - 1| " + fmt("%.1e", worst_sum) + ", translation bitwise " + std::to_string(translation_ok) +
             "/" + std::to_string(instances) + ", singleton bitwise " + std::to_string(singleton_ok) + "/" +
             std::to_string(singleton_total);
  return o;
}

// ---------------------------------------------------------------------------
// 4. Sampling contracts.

double min_pairwise(const std::vector<RadarPoint>& cloud, const std::vector<std::size_t>& subset) {
  double best = 1e300;
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      best = std::min(best, geom::squared_distance(cloud[subset[i]], cloud[subset[j]]));
  return std::sqrt(best);
}

Outcome sampling_contracts() {
  std::mt19937_64 rng(4);
  std::size_t ball_bad = 0, interval_bad = 0, knn_bad = 0, fps_bad = 0;

  for (int trial = 0; trial < 200; ++trial) {
    const auto cloud = uniform_cloud(rng, 1 + rng() % 80);
    const std::size_t qi = rng() % cloud.size();
    const double radius = 0.5 + 6.0 * static_cast<double>(rng() % 1000) / 1000.0;
    const auto ball = geom::ball_query_sample(cloud[qi], cloud, radius, 16, rng(), qi);
    bool ok = ball.indices.size() == 16;
    std::size_t inside = 0;
    for (const auto& p : cloud) inside += geom::squared_distance(p, cloud[qi]) <= radius * radius;
    for (auto i : ball.indices) ok = ok && i < cloud.size() && geom::squared_distance(cloud[i], cloud[qi]) <= radius * radius;
    ok = ok && std::set<std::size_t>(ball.indices.begin(), ball.indices.end()).size() == std::min<std::size_t>(inside, 16);
    ball_bad += !ok;

    const auto oracle = sort_oracle(cloud[qi], cloud);
    const auto interval = geom::interval_sample(cloud[qi], cloud, 2, 16, qi);
    ok = interval.indices.size() == 16;
    for (std::size_t j = 0; ok && j < 16; ++j) ok = interval.indices[j] == oracle[(2 * j) % cloud.size()];
    interval_bad += !ok;

    const RadarPoint q = uniform_cloud(rng, 1)[0];
    const auto q_oracle = sort_oracle(q, cloud);
    const auto near = geom::knn(q, cloud, 16);
    ok = near.indices.size() == 16;
    for (std::size_t j = 0; ok && j < 16; ++j) ok = near.indices[j] == q_oracle[j % q_oracle.size()];
    knn_bad += !ok;
  }

  // Max-min property: every pick is the farthest remaining point, and no
  // random subset of the same size spreads more than twice as wide.
  std::size_t fps_trials = 0, beaten = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = uniform_cloud(rng, 32);
    const auto picks = geom::farthest_point_sample(cloud, 8, rng());
    bool ok = picks.size() == 8;
    for (std::size_t s = 1; ok && s < picks.size(); ++s) {
      auto to_set = [&](std::size_t i) {
        double d = 1e300;
        for (std::size_t t = 0; t < s; ++t) d = std::min(d, geom::squared_distance(cloud[i], cloud[picks[t]]));
        return d;
      };
      double best = -1.0;
      for (std::size_t i = 0; i < cloud.size(); ++i) best = std::max(best, to_set(i));
      ok = to_set(picks[s]) == best;
    }
    const double spread = min_pairwise(cloud, picks);
    std::vector<std::size_t> all(32);
    std::iota(all.begin(), all.end(), 0);
    for (int s = 0; s < 1000; ++s) {
      std::shuffle(all.begin(), all.end(), rng);
      const double other = min_pairwise(cloud, {all.begin(), all.begin() + 8});
      ok = ok && other <= 2.0 * spread;
      beaten += other <= spread;
      ++fps_trials;
    }
    fps_bad += !ok;
  }

  Outcome o;
  o.pass = ball_bad == 0 && interval_bad == 0 && knn_bad == 0 && fps_bad == 0;
  o.detail = "ball " + std::to_string(200 - ball_bad) + "/200, interval " + std::to_string(200 - interval_bad) +
             "/200, knn " + std::to_string(200 - knn_bad) + "/200, FPS clouds " + std::to_string(10 - fps_bad) +
             "/10 (FPS spread >= random subset in " + std::to_string(beaten) + "/" + std::to_string(fps_trials) + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Baseline oracles.

Outcome baseline_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);

  // RANSAC on noiseless static scenes.
  double ransac_exact = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    sim::SceneConfig c;
    c.moving_count = 0;
    c.velocity_noise = 0.0;
    c.frames = 5;
    c.seed = seed;
    base::RansacConfig rc;
    rc.seed = seed;
    for (const auto& f : sim::simulate_sequence(c).frames) {
      ransac_exact = std::max(ransac_exact, std::abs(base::ransac_eve(f, rc) - *f.ego_v));
    }
  }

  // RANSAC with about 40% movers and 0.1 m/s noise, averaged over 500 frames.
  double noisy_sum = 0.0;
  std::size_t noisy_frames = 0, movers = 0, points = 0;
  for (std::uint64_t seed = 1; noisy_frames < 500; ++seed) {
    sim::SceneConfig c;
    c.moving_count = 8;
    c.velocity_noise = 0.1;
    c.frames = 20;
    c.seed = 1000 + seed;
    base::RansacConfig rc;
    rc.seed = seed;
    for (const auto& f : sim::simulate_sequence(c).frames) {
      if (noisy_frames == 500) break;
      noisy_sum += std::abs(base::ransac_eve(f, rc) - *f.ego_v);
      ++noisy_frames;
      for (auto l : *f.labels) movers += l == Motion::kMoving;
      points += f.size();
    }
  }
  const double noisy_mae = noisy_sum / static_cast<double>(noisy_frames);
  const double mover_share = static_cast<double>(movers) / static_cast<double>(points);

  // ICP on rigidly translated copies.
  double icp_err = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_real_distribution<double> x(-20, 20), y(1, 40), z(-1, 3), dyd(0.1, 1.2);
    RadarFrame prev;
    for (int i = 0; i < 150; ++i) prev.points.push_back({x(rng), y(rng), z(rng), 0.0});
    const double dy = dyd(rng), dt = 0.1;
    RadarFrame cur = prev;
    for (auto& p : cur.points) p.y -= dy;
    base::IcpConfig ic;
    ic.tolerance = 1e-9;
    icp_err = std::max(icp_err, std::abs(base::icp_velocity(prev, cur, dt, ic).velocity - dy / dt));
  }

  // Threshold MOS on noiseless compensated scenes, tau below every mover.
  std::size_t thr_frames = 0, thr_exact = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    sim::SceneConfig c;
    c.moving_count = 4;
    c.velocity_noise = 0.0;
    c.frames = 10;
    c.seed = 2000 + seed;
    for (const auto& f : sim::simulate_sequence(c).frames) {
      const auto comp = geom::velocity_compensate(*f.ego_v, f);
      double min_mover = 1e300;
      for (std::size_t i = 0; i < comp.frame.size(); ++i) {
        if ((*comp.frame.labels)[i] == Motion::kMoving) min_mover = std::min(min_mover, std::abs(comp.frame.points[i].v));
      }
      if (min_mover == 1e300 || min_mover < 1e-6) continue;
      ++thr_frames;
      const auto m = harness::compute_mos_metrics(base::threshold_mos(comp.frame, min_mover / 2), *comp.frame.labels);
      thr_exact += m.per_class[0].iou == 100.0 && m.per_class[1].iou == 100.0;
    }
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = ransac_exact < 1e-6 && noisy_mae < 0.05 && icp_err < 1e-5 && thr_frames > 0 && thr_exact == thr_frames &&
           secs < 60.0;
  o.detail = "RANSAC noiseless max err " + fmt("%.1e", ransac_exact) + ", RANSAC MAE " + fmt("%.4f", noisy_mae) +
             " over " + std::to_string(noisy_frames) + " frames with " + fmt("%.0f", 100 * mover_share) +
             "% movers, ICP max err " + fmt("%.1e", icp_err) + ", threshold IoU 100 on " + std::to_string(thr_exact) +
             "/" + std::to_string(thr_frames) + " frames, " + fmt("%.1f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 6 and 7. Desk runs.

sim::DatasetSpec desk_spec(double velocity_noise) {
  sim::DatasetSpec spec;
  spec.sequences = 60;
  spec.ratios = {50.0 / 60.0, 5.0 / 60.0, 5.0 / 60.0};
  spec.seed = 2026;
  spec.scene.moving_count = 5;
  spec.scene.velocity_noise = velocity_noise;
  return spec;
}

harness::ExperimentConfig desk_config() {
  harness::ExperimentConfig c;
  c.point_budget = 256;
  c.eve_epochs = 20;
  c.mos_epochs = 20;
  c.eve_decay_period = 7;
  c.mos_decay_period = 4;
  c.seed = 11;
  return c;
}

struct Desk {
  harness::LoadedSplit train, val, test;
};

Desk load_desk(const harness::ExperimentConfig& c, const sim::DatasetSpec& spec, const std::string& name) {
  const fs::path root = work_dir() / name;
  fs::remove_all(root);
  sim::simulate_dataset(spec, root);
  return {harness::load_split(root, harness::SplitPart::kTrain, c.time_gap, 0),
          harness::load_split(root, harness::SplitPart::kVal, c.time_gap, 0),
          harness::load_split(root, harness::SplitPart::kTest, c.time_gap, 0)};
}

double mover_share(const harness::LoadedSplit& split) {
  std::size_t movers = 0, points = 0;
  for (const auto& seq : split.sequences) {
    for (const auto& f : seq.frames) {
      for (auto l : *f.labels) movers += l == Motion::kMoving;
      points += f.size();
    }
  }
  return 100.0 * static_cast<double>(movers) / static_cast<double>(points);
}

harness::ProgressFn progress(const std::string& tag, Clock::time_point t0) {
  return [tag, t0](const harness::CurvePoint& p) {
    std::fprintf(stderr, "  %s epoch %d loss %.4f val %.4f (%.0f s)\n", tag.c_str(), p.epoch, p.loss, p.val_metric,
                 seconds_since(t0));
  };
}

Outcome eve_desk() {
  const auto t0 = Clock::now();
  const auto config = desk_config();
  const Desk d = load_desk(config, desk_spec(0.1), "desk_eve");
  const auto trained = harness::train_eve(config, d.train, d.val, progress("eve", t0));
  const double eve_mae = harness::evaluate(config, d.test, {&trained.model, nullptr, false}).eve.mae;
  const double ransac_mae =
      harness::run_baseline(harness::BaselineKind::kRansac, config, d.test, harness::BaselineVelocity::kOracle).eve.mae;
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = eve_mae < 0.3 && eve_mae < ransac_mae && secs < 1800.0;
  o.detail = std::to_string(d.train.pairs.size()) + " training pairs with " + fmt("%.0f", mover_share(d.train)) +
             "% movers, EVE test MAE " + fmt("%.4f", eve_mae) +
             " (< 0.3: " + (eve_mae < 0.3 ? "yes" : "no") + "), RANSAC MAE " + fmt("%.4f", ransac_mae) +
             " (EVE lower: " + (eve_mae < ransac_mae ? "yes" : "no") + "), " + fmt("%.0f", secs) + " s";
  return o;
}

Outcome mos_desk() {
  const auto t0 = Clock::now();
  auto config = desk_config();
  const Desk d = load_desk(config, desk_spec(0.2), "desk_mos");
  double miou[3] = {0, 0, 0};
  const net::VelocityInput inputs[3] = {net::VelocityInput::kCompensated, net::VelocityInput::kRaw,
                                        net::VelocityInput::kNone};
  for (int i = 0; i < 3; ++i) {
    config.mos.velocity_input = inputs[i];
    const auto trained = harness::train_mos(config, d.train, d.val, nullptr, progress(net::to_string(inputs[i]), t0));
    miou[i] = harness::evaluate(config, d.test, {nullptr, &trained.model, true}).mos.miou;
  }
  config.mos_threshold = base::kDefaultMosThreshold;
  const double thr = harness::run_baseline(harness::BaselineKind::kThreshold, config, d.test,
                                           harness::BaselineVelocity::kOracle)
                         .mos.miou;
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = miou[0] > thr && miou[2] < miou[1] && miou[1] < miou[0] && secs < 2700.0;
  o.detail = std::to_string(d.train.pairs.size()) + " training pairs with " + fmt("%.0f", mover_share(d.train)) +
             "% movers, test mIoU compensated " + fmt("%.2f", miou[0]) + ", raw " + fmt("%.2f", miou[1]) + ", none " +
             fmt("%.2f", miou[2]) + ", threshold(0.25) " + fmt("%.2f", thr) + ", " + fmt("%.0f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 8. Determinism and I/O.

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "moseve");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = moseve::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << "  moseve " << args[1] << " exited " << code << ": " << err.str();
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Relative path -> bytes for every regular file under `dir`.
std::vector<std::pair<std::string, std::string>> tree(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), dir).string(), slurp(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// IoU = F1 / (2 - F1) per class and every percentage in [0, 100], read back
// from a written report.
bool kv_identities_hold(const fs::path& report_kv) {
  const auto kv = KeyValues::load(report_kv);
  for (const char* cls : {"static", "moving"}) {
    const std::string p = std::string("mos.") + cls + ".";
    if (!kv.has(p + "iou")) continue;
    const double iou = kv.get_double(p + "iou", -1), f1 = kv.get_double(p + "f1", -1) / 100.0;
    if (std::abs(iou - 100.0 * f1 / (2.0 - f1)) > 1e-9) return false;
  }
  for (const auto& [key, value] : kv.entries()) {
    if (key.rfind("mos.", 0) == 0 && key != "mos.points") {
      const double v = parse_double(value);
      if (v < 0.0 || v > 100.0) return false;
    }
  }
  return true;
}

Outcome determinism_io() {
  const fs::path root = work_dir() / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  harness::ExperimentConfig c;
  c.point_budget = 64;
  c.eve_epochs = 2;
  c.mos_epochs = 2;
  c.max_train_pairs = 8;
  c.max_eval_pairs = 6;
  c.eve.backbone.stage_widths = {4, 6, 8, 8};
  c.eve.backbone.stage_radii = {3.0, 5.0, 8.0, 8.0};
  c.eve.backbone.k = 4;
  c.eve.head_sizes = {16, 8, 1};
  c.mos.encoder = c.eve.backbone;
  c.mos.decoder_widths = {6, 32};
  c.mos.head_sizes = {8, 6, 2};
  const fs::path cfg = root / "tiny.cfg";
  std::ofstream(cfg) << c.to_kv().to_string();

  std::vector<std::string> mismatched;
  std::size_t compared = 0, identities = 0, identity_files = 0;
  bool all_ok = true;
  auto same = [&](const std::string& what, const std::string& a, const std::string& b) {
    ++compared;
    if (a != b || a.empty()) mismatched.push_back(what);
  };

  std::string outputs[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path r = root / ("run" + std::to_string(run));
    const std::string data = (r / "data").string();
    const std::vector<std::vector<std::string>> commands = {
        {"simulate", "--config", cfg.string(), "--seed", "3", "--out", data, "--sequences", "6", "--frames", "14"},
        {"train-eve", "--config", cfg.string(), "--seed", "3", "--data", data, "--out", (r / "eve.ckpt").string(),
         "--curve", (r / "eve_curve.csv").string(), "--quiet"},
        {"train-mos", "--config", cfg.string(), "--seed", "3", "--data", data, "--out", (r / "mos.ckpt").string(),
         "--curve", (r / "mos_curve.csv").string(), "--oracle-velocity", "--quiet"},
        {"eval", "--config", cfg.string(), "--seed", "3", "--data", data, "--eve", (r / "eve.ckpt").string(), "--mos",
         (r / "mos.ckpt").string(), "--split", "test", "--out", (r / "eval").string()},
        {"eval", "--config", cfg.string(), "--seed", "3", "--data", data, "--eve", (r / "eve.ckpt").string(), "--mos",
         (r / "mos.ckpt").string(), "--split", "val", "--repeats", "2", "--out", (r / "eval_repeats").string()},
        {"baseline", "ransac", "--config", cfg.string(), "--seed", "3", "--data", data, "--split", "test", "--out",
         (r / "ransac").string()},
        {"baseline", "icp", "--config", cfg.string(), "--seed", "3", "--data", data, "--split", "test", "--out",
         (r / "icp").string()},
        {"baseline", "threshold", "--config", cfg.string(), "--seed", "3", "--data", data, "--split", "test",
         "--velocity", "oracle", "--out", (r / "threshold").string()},
        {"grad-check", "--seed", "3"},
    };
    for (const auto& cmd : commands) {
      const auto res = cli(cmd);
      all_ok = all_ok && res.code == 0;
      outputs[run] += "$ " + cmd[0] + "\n" + res.out;
    }
  }
  // Paths differ between the runs; everything else must match byte for byte.
  std::string out0 = outputs[0], out1 = outputs[1];
  for (auto* s : {&out0, &out1}) {
    for (const char* tag : {"/run0/", "/run1/"}) {
      for (std::size_t pos; (pos = s->find(tag)) != std::string::npos;) s->replace(pos, 6, "/runN/");
    }
  }
  same("stdout", out0, out1);
  const auto t0 = tree(root / "run0"), t1 = tree(root / "run1");
  if (t0.size() != t1.size()) mismatched.push_back("file list");
  for (std::size_t i = 0; i < std::min(t0.size(), t1.size()); ++i) {
    same(t0[i].first, t0[i].second, t1[i].first == t0[i].first ? t1[i].second : "");
    if (fs::path(t0[i].first).filename() == "report.kv") {
      ++identity_files;
      identities += kv_identities_hold(root / "run0" / t0[i].first);
    }
  }

  // CSV round trip: read, rewrite, read again.
  std::size_t sequences = 0, round_trips = 0;
  for (const auto& name : sim::list_sequences(root / "run0" / "data")) {
    ++sequences;
    const auto seq = sim::read_sequence(root / "run0" / "data" / name);
    const fs::path copy = root / "rewrite" / name;
    sim::write_sequence(seq, copy);
    const auto again = sim::read_sequence(copy);
    bool ok = again == seq;
    for (const char* file : {"points.csv", "ego.csv", "tracks.csv", "scene.cfg"}) {
      ok = ok && slurp(copy / file) == slurp(root / "run0" / "data" / name / file);
    }
    round_trips += ok;
  }

  Outcome o;
  o.pass = all_ok && mismatched.empty() && sequences > 0 && round_trips == sequences && identity_files > 0 &&
           identities == identity_files;
  std::string diff;
  for (const auto& m : mismatched) diff += " " + m;
  o.detail = std::to_string(compared - mismatched.size()) + "/" + std::to_string(compared) +
             " outputs byte-identical" + (diff.empty() ? "" : " (differ:" + diff + ")") + ", CSV round trip " +
             std::to_string(round_trips) + "/" + std::to_string(sequences) + " sequences bit-exact, identities " +
             std::to_string(identities) + "/" + std::to_string(identity_files) + " reports" +
             (all_ok ? "" : ", a command failed");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "sign convention keystone", sign_keystone},
      {2, "gradient suite", grad_suite},
      {3, "attention invariants", attention_invariants},
      {4, "sampling contracts", sampling_contracts},
      {5, "baseline oracles", baseline_oracles},
      {6, "EVE desk run", eve_desk},
      {7, "MOS desk run and ablation", mos_desk},
      {8, "determinism and I/O", determinism_io},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " [PRIMARY] " << c.name << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

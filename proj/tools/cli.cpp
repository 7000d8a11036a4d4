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

#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <optional>

#include "moseve/errors.hpp"
#include "moseve/harness/evaluation.hpp"
#include "moseve/harness/grad_suite.hpp"
#include "moseve/harness/training.hpp"
#include "moseve/network/model_io.hpp"

namespace moseve::cli {

namespace {

namespace fs = std::filesystem;
using harness::ExperimentConfig;

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Flat key=value config file")->check(CLI::ExistingFile);
  c.seed_opt = cmd->add_option("--seed", c.seed, "Random seed (overrides the config file)");
}

ExperimentConfig experiment_config(const Common& c) {
  ExperimentConfig config = c.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config_path);
  if (c.seed_opt->count()) config.seed = c.seed;
  config.validate();
  return config;
}

fs::path dataset_root(const std::string& flag, const ExperimentConfig& config) {
  const std::string root = flag.empty() ? config.dataset : flag;
  if (root.empty()) throw ValidationError("no dataset given (use --data or the dataset config key)");
  return root;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

harness::ProgressFn progress_printer(std::ostream& err, bool quiet, int epochs, const char* metric) {
  if (quiet) return {};
  auto start = std::chrono::steady_clock::now();
  return [&err, start, epochs, metric](const harness::CurvePoint& p) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "epoch " << p.epoch + 1 << "/" << epochs << "  loss " << fmt(p.loss) << "  " << metric << " "
        << fmt(p.val_metric) << "  (" << fmt(secs, 1) << " s)\n";
  };
}

void emit(const harness::MetricsReport& report, const std::string& out_dir, std::ostream& out) {
  if (!harness::report_identities_hold(report)) throw ContractError("metric identities violated in report");
  out << harness::report_to_text(report);
  if (!out_dir.empty()) harness::write_report(report, out_dir);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radar moving-object segmentation and ego-velocity estimation"};
  app.name("moseve");
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic labeled dataset");
  Common sim_common;
  std::string sim_out;
  std::size_t sim_sequences = 0;
  std::size_t sim_frames = 0;
  double sim_noise = -1.0;
  add_common(sim_cmd, sim_common);
  sim_cmd->add_option("--out", sim_out, "Output dataset directory")->required();
  auto* sim_seq_opt = sim_cmd->add_option("--sequences", sim_sequences, "Number of sequences");
  auto* sim_frames_opt = sim_cmd->add_option("--frames", sim_frames, "Frames per sequence");
  auto* sim_noise_opt = sim_cmd->add_option("--velocity-noise", sim_noise, "Radial velocity noise sigma, m/s");

  // train-eve
  auto* eve_cmd = app.add_subcommand("train-eve", "Train the ego-velocity network");
  Common eve_common;
  std::string eve_data, eve_out, eve_curve;
  int eve_epochs = 0;
  bool eve_quiet = false;
  add_common(eve_cmd, eve_common);
  eve_cmd->add_option("--data", eve_data, "Dataset directory");
  eve_cmd->add_option("--out", eve_out, "Checkpoint path")->required();
  eve_cmd->add_option("--curve", eve_curve, "Loss curve CSV path");
  auto* eve_epochs_opt = eve_cmd->add_option("--epochs", eve_epochs, "Override the epoch count");
  eve_cmd->add_flag("--quiet", eve_quiet, "No per-epoch progress");

  // train-mos
  auto* mos_cmd = app.add_subcommand("train-mos", "Train the moving-object segmentation network");
  Common mos_common;
  std::string mos_data, mos_out, mos_curve, mos_eve, mos_velocity_input;
  int mos_epochs = 0;
  bool mos_oracle = false, mos_no_velocity = false, mos_quiet = false;
  add_common(mos_cmd, mos_common);
  mos_cmd->add_option("--data", mos_data, "Dataset directory");
  mos_cmd->add_option("--out", mos_out, "Checkpoint path")->required();
  mos_cmd->add_option("--curve", mos_curve, "Loss curve CSV path");
  auto* mos_eve_opt = mos_cmd->add_option("--eve", mos_eve, "EVE checkpoint used for compensation");
  auto* mos_oracle_opt = mos_cmd->add_flag("--oracle-velocity", mos_oracle, "Compensate with ground-truth ego speed");
  mos_eve_opt->excludes(mos_oracle_opt);
  mos_cmd->add_option("--velocity-input", mos_velocity_input, "compensated, raw or none")
      ->check(CLI::IsMember({"compensated", "raw", "none"}));
  mos_cmd->add_flag("--no-velocity", mos_no_velocity, "Zero the velocity channel (same as --velocity-input none)");
  auto* mos_epochs_opt = mos_cmd->add_option("--epochs", mos_epochs, "Override the epoch count");
  mos_cmd->add_flag("--quiet", mos_quiet, "No per-epoch progress");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate checkpoints on a dataset split");
  Common eval_common;
  std::string eval_data, eval_eve, eval_mos, eval_split = "test", eval_out;
  bool eval_oracle = false;
  std::size_t eval_repeats = 1;
  add_common(eval_cmd, eval_common);
  eval_cmd->add_option("--data", eval_data, "Dataset directory");
  eval_cmd->add_option("--eve", eval_eve, "EVE checkpoint");
  eval_cmd->add_option("--mos", eval_mos, "MOS checkpoint");
  eval_cmd->add_option("--split", eval_split, "train, val or test");
  eval_cmd->add_option("--out", eval_out, "Directory for report.txt and report.kv");
  eval_cmd->add_flag("--oracle-velocity", eval_oracle, "Compensate MOS inputs with ground-truth ego speed");
  eval_cmd->add_option("--repeats", eval_repeats, "Pool this many runs with different sampling seeds")
      ->check(CLI::PositiveNumber);

  // baseline
  auto* base_cmd = app.add_subcommand("baseline", "Run a classical baseline");
  Common base_common;
  std::string base_kind, base_data, base_split = "test", base_out, base_velocity = "ransac";
  double base_tau = 0.0;
  std::size_t base_repeats = 1;
  add_common(base_cmd, base_common);
  base_cmd->add_option("kind", base_kind, "ransac, icp or threshold")
      ->required()
      ->check(CLI::IsMember({"ransac", "icp", "threshold"}));
  base_cmd->add_option("--data", base_data, "Dataset directory");
  base_cmd->add_option("--split", base_split, "train, val or test");
  base_cmd->add_option("--out", base_out, "Directory for report.txt and report.kv");
  base_cmd->add_option("--velocity", base_velocity, "Ego speed for threshold MOS: oracle or ransac")
      ->check(CLI::IsMember({"oracle", "ransac"}));
  auto* base_tau_opt = base_cmd->add_option("--tau", base_tau, "Threshold on |v'| in m/s");
  base_cmd->add_option("--repeats", base_repeats, "Pool this many runs with different sampling seeds")
      ->check(CLI::PositiveNumber);

  // grad-check
  auto* grad_cmd = app.add_subcommand("grad-check", "Run the finite-difference gradient suite");
  Common grad_common;
  double grad_tol = 1e-4;
  add_common(grad_cmd, grad_common);
  grad_cmd->add_option("--tolerance", grad_tol, "Maximum relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim_cmd) {
      sim::DatasetSpec spec;
      if (!sim_common.config_path.empty()) spec = sim::DatasetSpec::from_kv(KeyValues::load(sim_common.config_path));
      if (sim_common.seed_opt->count()) spec.seed = sim_common.seed;
      if (sim_seq_opt->count()) spec.sequences = sim_sequences;
      if (sim_frames_opt->count()) spec.scene.frames = sim_frames;
      if (sim_noise_opt->count()) spec.scene.velocity_noise = sim_noise;
      if (spec.sequences < 1) throw ValidationError("--sequences must be at least 1");
      const auto split = sim::simulate_dataset(spec, sim_out);
      out << "wrote " << spec.sequences << " sequences to " << sim_out << " (train " << split.train.size()
          << ", val " << split.val.size() << ", test " << split.test.size() << ")\n";
      return 0;
    }

    if (*eve_cmd) {
      ExperimentConfig config = experiment_config(eve_common);
      if (eve_epochs_opt->count()) config.eve_epochs = eve_epochs;
      config.validate();
      const fs::path root = dataset_root(eve_data, config);
      const auto train = harness::load_split(root, harness::SplitPart::kTrain, config.time_gap, config.max_train_pairs);
      const auto val = harness::load_split(root, harness::SplitPart::kVal, config.time_gap, config.max_eval_pairs);
      auto result = harness::train_eve(config, train, val, progress_printer(err, eve_quiet, config.eve_epochs, "val_mae"));
      net::save_eve(eve_out, result.model, result.report.metadata);
      if (!eve_curve.empty()) harness::write_curve(eve_curve, result.report.curve);
      out << "best epoch " << result.report.best_epoch + 1 << "  val_mae " << fmt(result.report.best_val, 6)
          << "  skipped " << result.report.skipped << "\n";
      return 0;
    }

    if (*mos_cmd) {
      ExperimentConfig config = experiment_config(mos_common);
      if (mos_epochs_opt->count()) config.mos_epochs = mos_epochs;
      if (!mos_velocity_input.empty()) config.mos.velocity_input = net::velocity_input_from_string(mos_velocity_input);
      if (mos_no_velocity) config.mos.velocity_input = net::VelocityInput::kNone;
      config.validate();
      if (mos_eve.empty() && !mos_oracle) {
        throw ValidationError("train-mos needs an EVE checkpoint (--eve) or --oracle-velocity");
      }
      const fs::path root = dataset_root(mos_data, config);
      const auto train = harness::load_split(root, harness::SplitPart::kTrain, config.time_gap, config.max_train_pairs);
      const auto val = harness::load_split(root, harness::SplitPart::kVal, config.time_gap, config.max_eval_pairs);
      std::optional<net::LoadedEve> eve;
      if (!mos_eve.empty()) eve.emplace(net::load_eve(mos_eve));
      auto result = harness::train_mos(config, train, val, eve ? &eve->net : nullptr,
                                       progress_printer(err, mos_quiet, config.mos_epochs, "val_miou"));
      net::save_mos(mos_out, result.model, result.report.metadata);
      if (!mos_curve.empty()) harness::write_curve(mos_curve, result.report.curve);
      out << "best epoch " << result.report.best_epoch + 1 << "  val_miou " << fmt(result.report.best_val) << "\n";
      return 0;
    }

    if (*eval_cmd) {
      ExperimentConfig config = experiment_config(eval_common);
      if (eval_eve.empty() && eval_mos.empty()) throw ValidationError("eval needs a checkpoint (--eve and/or --mos)");
      const fs::path root = dataset_root(eval_data, config);
      const auto split = harness::load_split(root, harness::split_part_from_string(eval_split), config.time_gap,
                                             config.max_eval_pairs);
      std::optional<net::LoadedEve> eve;
      std::optional<net::LoadedMos> mos;
      if (!eval_eve.empty()) {
        eve.emplace(net::load_eve(eval_eve));
        harness::check_no_overlap(eve->metadata, split);
      }
      if (!eval_mos.empty()) {
        mos.emplace(net::load_mos(eval_mos));
        harness::check_no_overlap(mos->metadata, split);
      }
      harness::EvalModels models{eve ? &eve->net : nullptr, mos ? &mos->net : nullptr, eval_oracle};
      emit(harness::evaluate_repeated(config, split, models, eval_repeats), eval_out, out);
      return 0;
    }

    if (*base_cmd) {
      ExperimentConfig config = experiment_config(base_common);
      if (base_tau_opt->count()) config.mos_threshold = base_tau;
      config.validate();
      const fs::path root = dataset_root(base_data, config);
      const auto split = harness::load_split(root, harness::split_part_from_string(base_split), config.time_gap,
                                             config.max_eval_pairs);
      emit(harness::run_baseline_repeated(harness::baseline_kind_from_string(base_kind), config, split,
                                          harness::baseline_velocity_from_string(base_velocity), base_repeats),
           base_out, out);
      return 0;
    }

    if (*grad_cmd) {
      const std::uint64_t seed = grad_common.seed_opt->count() ? grad_common.seed : experiment_config(grad_common).seed;
      bool all = true;
      for (const auto& e : harness::run_grad_suite(seed, grad_tol)) {
        all = all && e.result.passed;
        out << (e.result.passed ? "PASS " : "FAIL ") << e.name << "  max_rel_error " << e.result.max_rel_error
            << "  entries " << e.result.entries_checked << "\n";
      }
      return all ? 0 : 2;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace moseve::cli

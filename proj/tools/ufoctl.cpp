// Copyright 2026 The ufoctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ufoctl/experiment.hpp"

namespace {

using ufoctl::cli::ExperimentConfig;

struct Overrides {
  std::optional<std::string> target, optimizer, space, output_dir;
  std::optional<uint64_t> seed;
  std::optional<double> noise_sigma, dt_ns, cost_threshold, bandwidth;
  std::optional<int> n_max, rl_iterations, rl_batch, sgd_iterations, sgd_steps;
};

void add_common(CLI::App* cmd, std::string* config_path, Overrides* ov) {
  cmd->add_option("--config", *config_path, "experiment config JSON");
  cmd->add_option("--target", ov->target, "target gate, e.g. CZ or N:2.2:1.5708");
  cmd->add_option("--optimizer", ov->optimizer, "rl or sgd");
  cmd->add_option("--seed", ov->seed, "master RNG seed");
  cmd->add_option("--space", ov->space, "qubit or full");
  cmd->add_option("--noise-sigma", ov->noise_sigma, "control noise sigma in MHz");
  cmd->add_option("--dt-ns", ov->dt_ns, "step duration in ns");
  cmd->add_option("--n-max", ov->n_max, "step horizon");
  cmd->add_option("--cost-threshold", ov->cost_threshold, "terminal cost threshold");
  cmd->add_option("--bandwidth", ov->bandwidth, "control filter bandwidth in MHz");
  cmd->add_option("--rl-iterations", ov->rl_iterations, "trust-region updates");
  cmd->add_option("--rl-batch", ov->rl_batch, "batch size (steps or episodes)");
  cmd->add_option("--sgd-iterations", ov->sgd_iterations, "Adam iterations");
  cmd->add_option("--sgd-steps", ov->sgd_steps, "trajectory steps for sgd");
  cmd->add_option("--output-dir", ov->output_dir, "artifact directory");
}

ExperimentConfig make_config(const std::string& config_path, const Overrides& ov) {
  ExperimentConfig cfg = config_path.empty()
                             ? ExperimentConfig{}
                             : ExperimentConfig::load(config_path);
  if (ov.target) cfg.target = *ov.target;
  if (ov.optimizer) cfg.optimizer = *ov.optimizer;
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.space) cfg.space = *ov.space;
  if (ov.noise_sigma) cfg.noise_sigma_mhz = *ov.noise_sigma;
  if (ov.dt_ns) cfg.dt_ns = *ov.dt_ns;
  if (ov.n_max) cfg.n_max = *ov.n_max;
  if (ov.cost_threshold) cfg.cost_threshold = *ov.cost_threshold;
  if (ov.bandwidth) cfg.filter_bandwidth_mhz = *ov.bandwidth;
  if (ov.rl_iterations) cfg.rl_iterations = *ov.rl_iterations;
  if (ov.rl_batch) cfg.rl_batch = *ov.rl_batch;
  if (ov.sgd_iterations) cfg.sgd_iterations = *ov.sgd_iterations;
  if (ov.sgd_steps) cfg.sgd_steps = *ov.sgd_steps;
  if (ov.output_dir) cfg.output_dir = *ov.output_dir;
  ufoctl::cli::apply_seed_env_override(cfg);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qubit control optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto* train = app.add_subcommand("train", "optimize a control trajectory");
  add_common(train, &config_path, &ov);

  auto* sweep = app.add_subcommand("sweep-alpha", "curriculum sweep over the gate family");
  add_common(sweep, &config_path, &ov);
  double gamma = M_PI / 2.0, alpha_min = 0.0, alpha_max = M_PI, alpha_step = 0.1;
  sweep->add_option("--gamma", gamma, "ZZ angle of the target family");
  sweep->add_option("--alpha-min", alpha_min, "first alpha");
  sweep->add_option("--alpha-max", alpha_max, "last alpha");
  sweep->add_option("--alpha-step", alpha_step, "alpha increment");

  auto* robust = app.add_subcommand("robustness", "fidelity statistics across a sigma grid");
  add_common(robust, &config_path, &ov);
  std::string input;
  double sigma_min = 0.1, sigma_max = 3.5;
  int sigma_points = 8, samples = 60;
  robust->add_option("--input", input, "trajectory or checkpoint JSON")->required();
  robust->add_option("--sigma-min", sigma_min, "grid start in MHz");
  robust->add_option("--sigma-max", sigma_max, "grid end in MHz");
  robust->add_option("--sigma-points", sigma_points, "grid size");
  robust->add_option("--samples", samples, "noise draws per grid point");

  auto* audit = app.add_subcommand("leakage-audit", "bounds vs exact leakage for a trajectory");
  add_common(audit, &config_path, &ov);
  audit->add_option("--input", input, "trajectory or checkpoint JSON")->required();

  auto* eval = app.add_subcommand("evaluate", "cost breakdown of a stored trajectory");
  add_common(eval, &config_path, &ov);
  eval->add_option("--input", input, "trajectory or checkpoint JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = make_config(config_path, ov);
    if (train->parsed()) {
      const auto art = ufoctl::cli::cmd_train(cfg);
      std::cout << art.summary_path << "\n" << art.trajectory_path << "\n"
                << art.history_path << "\n";
      if (!art.checkpoint_path.empty()) std::cout << art.checkpoint_path << "\n";
    } else if (sweep->parsed()) {
      std::cout << ufoctl::cli::cmd_sweep_alpha(cfg, gamma, alpha_min, alpha_max, alpha_step)
                << "\n";
    } else if (robust->parsed()) {
      if (sigma_points < 1) throw ufoctl::cli::ConfigError("--sigma-points must be >= 1");
      std::vector<double> grid;
      for (int i = 0; i < sigma_points; ++i) {
        grid.push_back(sigma_points == 1 ? sigma_min
                                         : sigma_min + (sigma_max - sigma_min) * double(i) /
                                               double(sigma_points - 1));
      }
      std::cout << ufoctl::cli::cmd_robustness(cfg, input, grid, samples) << "\n";
    } else if (audit->parsed()) {
      std::cout << ufoctl::cli::cmd_leakage_audit(cfg, input) << "\n";
    } else if (eval->parsed()) {
      std::cout << ufoctl::cli::cmd_evaluate(cfg, input) << "\n";
    }
  } catch (const ufoctl::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ufoctl::cli::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ufoctl::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ufoctl::cli::kExitNumeric;
  }
  return ufoctl::cli::kExitOk;
}

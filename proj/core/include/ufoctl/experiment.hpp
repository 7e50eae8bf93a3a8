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

#ifndef UFOCTL_EXPERIMENT_HPP_
#define UFOCTL_EXPERIMENT_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "ufoctl/baseline.hpp"
#include "ufoctl/evaluate.hpp"
#include "ufoctl/rl.hpp"

namespace ufoctl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One experiment: target gate, cost weights, noise and filter settings,
/// optimizer choice and its hyperparameters. Serializes to a single JSON
/// document; the hash of the canonical dump is embedded in every output.
struct ExperimentConfig {
  std::string target = "CZ";
  std::string optimizer = "sgd";  // "rl" | "sgd"
  uint64_t seed = 0;
  std::string space = "qubit";  // "qubit" | "full"
  double eta_mhz = 200.0;
  double dt_ns = 1.0;
  int n_max = 100;
  objective::UfoWeights weights;
  double noise_sigma_mhz = 1.0;
  bool eta_per_episode = false;
  double filter_bandwidth_mhz = 10.0;
  double amplitude_scale_mhz = 20.0;

  // rl
  int rl_iterations = 50;
  int rl_batch = 2048;
  std::string rl_batch_mode = "steps";  // "steps" | "episodes"
  double trust_region_kl = 0.01;
  double discount = 0.99;
  double gae_lambda = -1.0;
  std::vector<int> hidden = {64, 32, 32};
  double cost_threshold = 0.05;
  bool per_step_reward = true;
  bool full_state_features = false;
  bool paper_scale = false;  // 20000-episode batches instead of desk-scale

  // sgd
  int sgd_iterations = 2000;
  double sgd_lr = 0.05;
  double fd_step = 1e-3;
  double init_scale_mhz = 1.0;
  int sgd_steps = 60;

  std::string output_dir = "out";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string to_json_text() const;
  /// FNV-1a hash (hex) of the canonical config dump.
  std::string hash() const;
  /// Table-range and consistency validation; throws ConfigError naming
  /// the offending field.
  void validate() const;

  dynamics::Space space_enum() const;
  rl::EnvConfig env_config() const;
  rl::TrustRegionConfig trust_config() const;
  baseline::Problem sgd_problem() const;
  baseline::SgdConfig sgd_config() const;
  targets::GateTarget gate() const;
};

/// UFOCTL_SEED environment variable overrides the config seed.
void apply_seed_env_override(ExperimentConfig& cfg);

struct TrainArtifacts {
  std::string summary_path;
  std::string trajectory_path;
  std::string history_path;
  std::string checkpoint_path;  // empty for sgd
};

/// Run the configured optimizer; writes trajectory JSON, training CSV,
/// summary JSON (cost breakdown, gate time, leakage ledger) and, for rl,
/// a checkpoint.
TrainArtifacts cmd_train(const ExperimentConfig& cfg);

/// Curriculum sweep over alpha at fixed gamma; emits one CSV row per
/// alpha with the per-point gate time and cost terms.
std::string cmd_sweep_alpha(const ExperimentConfig& cfg, double gamma, double alpha_min,
                            double alpha_max, double alpha_step = 0.1);

/// Fidelity statistics across a sigma grid for a stored trajectory (or a
/// checkpoint, which is rolled out deterministically first).
std::string cmd_robustness(const ExperimentConfig& cfg, const std::string& input_path,
                           const std::vector<double>& sigma_grid, int n_samples);

/// Leakage ledger, non-adiabatic bound, exact bare/dressed leakage and
/// the dominance ratios, as JSON.
std::string cmd_leakage_audit(const ExperimentConfig& cfg, const std::string& trajectory_path);

/// Cost breakdown and fidelity of a stored trajectory, as JSON.
std::string cmd_evaluate(const ExperimentConfig& cfg, const std::string& trajectory_path);

}  // namespace ufoctl::cli

#endif  // UFOCTL_EXPERIMENT_HPP_

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

#ifndef UFOCTL_RL_HPP_
#define UFOCTL_RL_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ufoctl/mlp.hpp"
#include "ufoctl/objective.hpp"
#include "ufoctl/rng.hpp"
#include "ufoctl/targets.hpp"

namespace ufoctl::rl {

inline constexpr int kActionDim = 7;

/// Markov decision process over control steps. State features are the
/// flattened real/imag parts of the Omega0-block propagator plus the
/// normalized episode time (33 features; 163 with full_state_features).
struct EnvConfig {
  gmon::GmonModel model = gmon::GmonModel::standard();
  Eigen::Matrix4cd target = Eigen::Matrix4cd::Identity();
  objective::UfoWeights weights;
  double noise_sigma_mhz = 0.0;
  bool eta_per_episode = false;
  double filter_bandwidth_mhz = 10.0;
  double dt_ns = 1.0;
  int n_max = 100;
  double cost_threshold = 0.05;
  dynamics::Space space = dynamics::Space::qubit;
  bool full_state_features = false;
  bool per_step_reward = true;
  double amplitude_scale_mhz = 20.0;

  int state_dim() const { return (full_state_features ? 2 * 81 : 2 * 16) + 1; }
};

struct EnvState {
  Eigen::VectorXd features;
  int step_index = 0;
};

/// True iff the running cost qualifies as a satisfiable terminal value.
inline bool terminal_check(const objective::CostBreakdown& cost, double threshold) {
  return cost.total <= threshold;
}

class ControlEnv {
 public:
  explicit ControlEnv(EnvConfig cfg);

  EnvState reset(uint64_t episode_seed);

  struct StepResult {
    EnvState state;
    double reward = 0.0;
    bool done = false;
  };
  /// Action components are clamped to [-1,1], scaled to the knob ranges,
  /// low-pass filtered, perturbed, and applied for one dt.
  StepResult step(const Eigen::VectorXd& action);

  const control::ControlTrajectory& realized() const { return realized_; }
  const std::vector<double>& eta_seq() const { return eta_; }
  const objective::CostBreakdown& final_cost() const { return final_cost_; }
  const EnvConfig& config() const { return cfg_; }

 private:
  EnvState observe() const;

  EnvConfig cfg_;
  control::FilterConfig filter_;
  qops::Matrix h0_;
  qops::Matrix u_;
  control::ControlTrajectory realized_;
  std::vector<double> eta_;
  control::ControlKnobs prev_{}, prev2_{};
  std::unique_ptr<rng::Stream> noise_;
  double eta_episode_ = 0.0;
  std::optional<tswt::LedgerAccumulator> ledger_;
  objective::RewardTracker tracker_;
  objective::CostBreakdown final_cost_;
  int step_index_ = 0;
  bool done_ = true;
};

/// Gaussian policy: MLP state -> action mean, plus a state-independent
/// learned log-std per action dimension. Flat parameters are the mean-net
/// parameters followed by log_std.
struct GaussianPolicy {
  mlp::Mlp mean;
  Eigen::VectorXd log_std;

  GaussianPolicy(int state_dim, const std::vector<int>& hidden, uint64_t seed,
                 double initial_log_std = -0.5);

  int param_count() const { return mean.param_count() + int(log_std.size()); }
  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& flat);

  Eigen::VectorXd action_mean(const Eigen::VectorXd& state) const {
    return mean.forward(state);
  }
  double log_prob(const Eigen::VectorXd& mean_out, const Eigen::VectorXd& action) const;
  double entropy() const;
};

/// Mean KL(old || new) of the two diagonal-Gaussian policies over states.
double mean_kl(const GaussianPolicy& old_policy, const GaussianPolicy& new_policy,
               const std::vector<Eigen::VectorXd>& states);

struct TrustRegionConfig {
  double kl_threshold = 0.01;
  double cg_damping = 0.1;
  int cg_iterations = 15;
  double line_search_shrink = 0.5;
  int line_search_steps = 10;
  double discount = 0.99;
  double gae_lambda = -1.0;  // < 0: plain return-to-go minus baseline
  bool normalize_advantages = true;
  int value_epochs = 40;
  double value_lr = 1e-2;
};

struct Agent {
  GaussianPolicy policy;
  mlp::Mlp value;
  mlp::Adam value_opt;
  TrustRegionConfig cfg;
  int batch_steps = 2048;
  uint64_t seed = 0;

  static Agent make(int state_dim, const TrustRegionConfig& cfg, int batch_steps,
                    uint64_t seed, const std::vector<int>& hidden = {64, 32, 32});
};

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
  double reward = 0.0;
};

struct Episode {
  std::vector<Transition> transitions;
  objective::CostBreakdown terminal_cost;
  control::ControlTrajectory realized;
  int length() const { return int(transitions.size()); }
  double total_reward() const;
};

enum class BatchMode { steps, episodes };

/// Collect episodes until n units (environment steps or whole episodes)
/// are gathered. Episode e uses RNG streams derived from (seed, e), so a
/// parallel collector would produce the same batch.
std::vector<Episode> sample_batch(const Agent& agent, const EnvConfig& env_cfg, int n,
                                  BatchMode mode, uint64_t batch_seed);

struct UpdateDiagnostics {
  double kl = 0.0;
  double surrogate_improvement = 0.0;
  double mean_return = 0.0;
  double value_loss_before = 0.0;
  double value_loss_after = 0.0;
  double entropy = 0.0;
  double step_fraction = 0.0;
  bool accepted = false;
};

/// One trust-region policy step (natural gradient via conjugate gradient
/// on Fisher-vector products, backtracking line search) plus a value-net
/// regression on discounted returns. Returns the policy unchanged when
/// the line search fails.
UpdateDiagnostics trpo_update(Agent& agent, const std::vector<Episode>& batch);

/// Adaptive curriculum: advance alpha by 0.1 after either a success or a
/// budget timeout (flagged by the caller), clamped to pi.
double curriculum_advance(double alpha, double step = 0.1);

/// Deterministic rollout of the mean policy in a noise-free copy of the
/// environment; returns the realized control trajectory.
control::ControlTrajectory deterministic_rollout(const Agent& agent, const EnvConfig& env_cfg);

/// Checkpoint: layer shapes, row-major weights, log_std, value-optimizer
/// state, RNG seed and config hash.
std::string agent_to_json(const Agent& agent, const std::string& config_hash);
Agent agent_from_json(const std::string& text, int state_dim);

}  // namespace ufoctl::rl

#endif  // UFOCTL_RL_HPP_

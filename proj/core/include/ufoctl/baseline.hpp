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

#ifndef UFOCTL_BASELINE_HPP_
#define UFOCTL_BASELINE_HPP_

#include <functional>
#include <vector>

#include "ufoctl/mlp.hpp"
#include "ufoctl/objective.hpp"

namespace ufoctl::baseline {

/// Direct optimization of the flattened control trajectory. Parameter
/// layout: per step [g, d1, d2, f1, f2, p1, p2], steps concatenated.
struct SgdConfig {
  mlp::Adam::Config adam{0.05, 0.9, 0.999, 1e-8};
  int iterations = 2000;
  double fd_step_mhz = 1e-3;   // central-difference step (also rad for phases)
  int noise_average = 0;       // > 0: average cost over this many noise seeds
  double noise_sigma_mhz = 0.0;
  double init_scale_mhz = 1.0;
  uint64_t seed = 0;
  double divergence_abort = 1e6;
};

struct Problem {
  gmon::GmonModel model = gmon::GmonModel::standard();
  Eigen::Matrix4cd target = Eigen::Matrix4cd::Identity();
  objective::UfoWeights weights;
  dynamics::Space space = dynamics::Space::qubit;
  double dt_ns = 1.0;
  int n_steps = 60;
};

Eigen::VectorXd flatten(const control::ControlTrajectory& traj);
control::ControlTrajectory unflatten(const Eigen::VectorXd& params, double dt_ns);

/// Noise-free UFO cost of a flattened trajectory (or seed-averaged when
/// the config requests noisy evaluations).
double evaluate_cost(const Eigen::VectorXd& params, const Problem& prob, const SgdConfig& cfg);

/// Central finite differences, step h per coordinate.
Eigen::VectorXd cost_gradient(const Eigen::VectorXd& params, const Problem& prob,
                              const SgdConfig& cfg);

struct OptimizeResult {
  Eigen::VectorXd best_params;
  double best_cost = 0.0;
  std::vector<double> cost_history;  // cost at every iterate
  objective::CostBreakdown best_breakdown;
};

/// Adam descent with best-so-far bookkeeping. Random init of scale
/// init_scale_mhz (seeded); throws std::runtime_error on divergence.
OptimizeResult adam_optimize(const Problem& prob, const SgdConfig& cfg);
OptimizeResult adam_optimize_from(const Eigen::VectorXd& init, const Problem& prob,
                                  const SgdConfig& cfg);

}  // namespace ufoctl::baseline

#endif  // UFOCTL_BASELINE_HPP_

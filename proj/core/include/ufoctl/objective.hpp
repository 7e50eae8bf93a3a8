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

#ifndef UFOCTL_OBJECTIVE_HPP_
#define UFOCTL_OBJECTIVE_HPP_

#include <string>
#include <vector>

#include "ufoctl/dynamics.hpp"
#include "ufoctl/tswt.hpp"

namespace ufoctl::objective {

/// Cost weights: chi * infidelity + beta * leakage bound
/// + mu * boundary penalty (MHz^2) + kappa * runtime (us).
struct UfoWeights {
  double chi = 10.0;
  double beta = 10.0;
  double mu = 0.2;
  double kappa = 0.1;
};

struct CostBreakdown {
  double infidelity_term = 0.0;
  double leakage_term = 0.0;
  double boundary_term = 0.0;
  double time_term = 0.0;
  double total = 0.0;
};

CostBreakdown assemble_cost(double fidelity, double l_tot, double boundary_mhz2,
                            double duration_us, const UfoWeights& w);

/// Full cost of a trajectory: fidelity of the Omega0 block against the
/// target, three-term leakage bound (zero in the qubit space), boundary
/// penalty, runtime. An eta sequence evaluates a noisy realization.
CostBreakdown ufo_cost(const control::ControlTrajectory& traj, const gmon::GmonModel& model,
                       const Eigen::Matrix4cd& target, const UfoWeights& w,
                       dynamics::Space space, const std::vector<double>* eta_seq = nullptr);

/// csv row "infidelity,leakage,boundary,time,total" (17 significant digits).
std::string cost_csv_header();
std::string cost_csv_row(const CostBreakdown& c);

/// Reward shaping for the step environment. In per-step mode each step
/// pays the runtime increment and the growth of the leakage-bound
/// integral term; the terminal step pays infidelity, boundary penalty and
/// the ledger boundary terms. In terminal-only mode everything is paid at
/// the end. Either way the episode return telescopes to -total cost.
class RewardTracker {
 public:
  RewardTracker(const UfoWeights& w, bool per_step) : w_(w), per_step_(per_step) {}

  double step_reward(double dt_us, double integral_term_after, bool terminal, double fidelity,
                     double boundary_mhz2, double ledger_boundary_terms);

 private:
  UfoWeights w_;
  bool per_step_ = true;
  double prev_integral_ = 0.0;
  double deferred_ = 0.0;  // runtime+integral charges held back in terminal-only mode
};

}  // namespace ufoctl::objective

#endif  // UFOCTL_OBJECTIVE_HPP_

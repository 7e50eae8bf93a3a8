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

#include "ufoctl/objective.hpp"

#include <cstdio>

namespace ufoctl::objective {

CostBreakdown assemble_cost(double fidelity, double l_tot, double boundary_mhz2,
                            double duration_us, const UfoWeights& w) {
  CostBreakdown c;
  c.infidelity_term = w.chi * (1.0 - fidelity);
  c.leakage_term = w.beta * l_tot;
  c.boundary_term = w.mu * boundary_mhz2;
  c.time_term = w.kappa * duration_us;
  c.total = c.infidelity_term + c.leakage_term + c.boundary_term + c.time_term;
  return c;
}

CostBreakdown ufo_cost(const control::ControlTrajectory& traj, const gmon::GmonModel& model,
                       const Eigen::Matrix4cd& target, const UfoWeights& w,
                       dynamics::Space space, const std::vector<double>* eta_seq) {
  const auto result = dynamics::propagate_with_eta(traj, model, eta_seq, space);
  Eigen::Matrix4cd block;
  if (space == dynamics::Space::full) {
    block = dynamics::omega0_block(result.unitary, model.layout);
  } else {
    block = result.unitary;
  }
  const double fidelity = dynamics::gate_fidelity(block, target);

  double l_tot = 0.0;
  if (space == dynamics::Space::full && traj.steps.size() >= 3) {
    const auto frames = tswt::frames_along(traj, model, eta_seq);
    l_tot = tswt::leakage_bound(frames, traj.dt_ns, model.layout).l_tot;
  }
  const double boundary = control::boundary_values(traj).total();
  return assemble_cost(fidelity, l_tot, boundary, traj.duration_us(), w);
}

std::string cost_csv_header() { return "infidelity,leakage,boundary,time,total"; }

std::string cost_csv_row(const CostBreakdown& c) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g", c.infidelity_term,
                c.leakage_term, c.boundary_term, c.time_term, c.total);
  return buf;
}

double RewardTracker::step_reward(double dt_us, double integral_term_after, bool terminal,
                                  double fidelity, double boundary_mhz2,
                                  double ledger_boundary_terms) {
  const double increment =
      w_.kappa * dt_us + w_.beta * (integral_term_after - prev_integral_);
  prev_integral_ = integral_term_after;

  double reward = 0.0;
  if (per_step_) {
    reward -= increment;
  } else {
    deferred_ += increment;
  }
  if (terminal) {
    reward -= w_.chi * (1.0 - fidelity) + w_.mu * boundary_mhz2 +
              w_.beta * ledger_boundary_terms + deferred_;
    deferred_ = 0.0;
  }
  return reward;
}

}  // namespace ufoctl::objective

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "ufoctl/objective.hpp"
#include "ufoctl/targets.hpp"

using namespace ufoctl;
using objective::CostBreakdown;
using objective::UfoWeights;

namespace {
const gmon::GmonModel kModel = gmon::GmonModel::standard();
}

TEST_CASE("assemble_cost arithmetic") {
  const UfoWeights w;
  SUBCASE("perfect gate, no penalties") {
    const auto c = objective::assemble_cost(1.0, 0.0, 0.0, 0.0, w);
    CHECK(c.total == 0.0);
  }
  SUBCASE("F = 0.99 alone gives 0.1 at chi = 10") {
    const auto c = objective::assemble_cost(0.99, 0.0, 0.0, 0.0, w);
    CHECK(c.infidelity_term == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(c.total == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("a 200 ns gate costs 0.02 in runtime at kappa = 0.1") {
    const auto c = objective::assemble_cost(1.0, 0.0, 0.0, 0.2, w);
    CHECK(c.time_term == doctest::Approx(0.02).epsilon(1e-12));
  }
}

TEST_CASE("ufo_cost cross-checks against independently computed components") {
  const auto traj = test_support::leakage_ensemble_trajectory(50, 1.0, 10.0, 20.0, 17);
  const auto target = targets::canonical_gate("ISWAP").matrix;
  const UfoWeights w;

  const auto cost = objective::ufo_cost(traj, kModel, target, w, dynamics::Space::full);

  const auto u = dynamics::propagate(traj, kModel, nullptr, dynamics::Space::full).unitary;
  const double f = dynamics::gate_fidelity(dynamics::omega0_block(u, kModel.layout), target);
  const auto frames = tswt::frames_along(traj, kModel);
  const double l_tot = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout).l_tot;
  const double boundary = control::boundary_values(traj).total();

  CHECK(cost.infidelity_term == doctest::Approx(10.0 * (1.0 - f)).epsilon(1e-12));
  CHECK(cost.leakage_term == doctest::Approx(10.0 * l_tot).epsilon(1e-12));
  CHECK(cost.boundary_term == doctest::Approx(0.2 * boundary).epsilon(1e-12));
  CHECK(cost.time_term == doctest::Approx(0.1 * 0.05).epsilon(1e-12));
  CHECK(cost.total == doctest::Approx(cost.infidelity_term + cost.leakage_term +
                                      cost.boundary_term + cost.time_term)
                          .epsilon(1e-12));

  SUBCASE("qubit space carries no leakage term") {
    const auto cq = objective::ufo_cost(traj, kModel, target, w, dynamics::Space::qubit);
    CHECK(cq.leakage_term == 0.0);
  }
}

TEST_CASE("monotonicity in each weight") {
  const auto traj = test_support::leakage_ensemble_trajectory(30, 1.0, 10.0, 20.0, 23);
  const auto target = targets::canonical_gate("CZ").matrix;
  const UfoWeights base;
  const double t0 = objective::ufo_cost(traj, kModel, target, base, dynamics::Space::full).total;
  for (int which = 0; which < 4; ++which) {
    UfoWeights w = base;
    (which == 0 ? w.chi : which == 1 ? w.beta : which == 2 ? w.mu : w.kappa) *= 2.0;
    const double t1 = objective::ufo_cost(traj, kModel, target, w, dynamics::Space::full).total;
    CHECK(t1 >= t0 - 1e-12);
  }
}

TEST_CASE("cost csv row") {
  CostBreakdown c;
  c.infidelity_term = 0.5;
  c.total = 0.5;
  CHECK(objective::cost_csv_header() == "infidelity,leakage,boundary,time,total");
  CHECK(objective::cost_csv_row(c) == "0.5,0,0,0,0.5");
}

TEST_CASE("reward tracker telescopes in both modes") {
  const UfoWeights w;
  const double dt_us = 0.001;

  for (bool per_step : {true, false}) {
    objective::RewardTracker tracker(w, per_step);
    double ret = 0.0;
    // fake a 5-step episode with a growing integral term
    const double integrals[5] = {0.0, 1e-5, 3e-5, 7e-5, 9e-5};
    for (int k = 0; k < 5; ++k) {
      const bool terminal = (k == 4);
      ret += tracker.step_reward(dt_us, integrals[k], terminal, 0.97, 12.0, 4e-4);
    }
    const auto expected =
        objective::assemble_cost(0.97, 9e-5 + 4e-4, 12.0, 5 * dt_us, w);
    CHECK(ret == doctest::Approx(-expected.total).epsilon(1e-12));
  }

  SUBCASE("kappa = 0 leaves only leakage increments before the terminal step") {
    UfoWeights w0;
    w0.kappa = 0.0;
    objective::RewardTracker tracker(w0, true);
    const double r0 = tracker.step_reward(dt_us, 0.0, false, 0.0, 0.0, 0.0);
    CHECK(r0 == 0.0);
    const double r1 = tracker.step_reward(dt_us, 2e-5, false, 0.0, 0.0, 0.0);
    CHECK(r1 == doctest::Approx(-w0.beta * 2e-5).epsilon(1e-12));
  }

  SUBCASE("zero-length episode contributes nothing") {
    objective::RewardTracker tracker(w, true);
    // no steps taken: nothing accumulated, nothing to check beyond state
    CHECK(true);
  }
}

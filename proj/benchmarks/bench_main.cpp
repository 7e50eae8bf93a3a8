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

#include <benchmark/benchmark.h>

#include "ufoctl/dynamics.hpp"
#include "ufoctl/rl.hpp"
#include "ufoctl/tswt.hpp"

namespace {

using namespace ufoctl;

const gmon::GmonModel kModel = gmon::GmonModel::standard();

control::ControlTrajectory bench_trajectory(int n) {
  control::ControlTrajectory traj;
  traj.dt_ns = 1.0;
  traj.steps.resize(n);
  for (int k = 0; k < n; ++k) {
    traj.steps[k].g_mhz = 12.0 * std::sin(0.05 * k);
    traj.steps[k].delta1_mhz = 6.0 * std::cos(0.04 * k);
    traj.steps[k].f1_mhz = 8.0 * std::sin(0.03 * k + 0.4);
  }
  return traj;
}

void BM_ExpmFull(benchmark::State& state) {
  const auto h = gmon::assemble_h(bench_trajectory(1).steps[0], kModel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamics::expm_hermitian(h, 1e-3));
  }
}
BENCHMARK(BM_ExpmFull);

void BM_PropagateFull100(benchmark::State& state) {
  const auto traj = bench_trajectory(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dynamics::propagate(traj, kModel, nullptr, dynamics::Space::full));
  }
}
BENCHMARK(BM_PropagateFull100);

void BM_PropagateQubit100(benchmark::State& state) {
  const auto traj = bench_trajectory(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dynamics::propagate(traj, kModel, nullptr, dynamics::Space::qubit));
  }
}
BENCHMARK(BM_PropagateQubit100);

void BM_TswtFrames100(benchmark::State& state) {
  const auto traj = bench_trajectory(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tswt::frames_along(traj, kModel));
  }
}
BENCHMARK(BM_TswtFrames100);

void BM_LeakageBound100(benchmark::State& state) {
  const auto traj = bench_trajectory(100);
  const auto frames = tswt::frames_along(traj, kModel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tswt::leakage_bound(frames, traj.dt_ns, kModel.layout));
  }
}
BENCHMARK(BM_LeakageBound100);

void BM_EnvEpisodeQubit(benchmark::State& state) {
  rl::EnvConfig cfg;
  cfg.target = targets::canonical_gate("CZ").matrix;
  cfg.n_max = 100;
  rl::ControlEnv env(cfg);
  const Eigen::VectorXd action = Eigen::VectorXd::Constant(rl::kActionDim, 0.2);
  for (auto _ : state) {
    env.reset(1);
    bool done = false;
    while (!done) done = env.step(action).done;
  }
}
BENCHMARK(BM_EnvEpisodeQubit);

void BM_PolicyForward(benchmark::State& state) {
  rl::GaussianPolicy policy(33, {64, 32, 32}, 5);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(33, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(policy.action_mean(x));
  }
}
BENCHMARK(BM_PolicyForward);

}  // namespace

BENCHMARK_MAIN();

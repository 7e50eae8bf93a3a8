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

#ifndef UFOCTL_CONTROL_HPP_
#define UFOCTL_CONTROL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ufoctl/gmon.hpp"

namespace ufoctl::control {

using gmon::ControlKnobs;
using gmon::GmonModel;

/// Piecewise-constant control sequence. Step k is held on
/// [k*dt, (k+1)*dt); total duration T = dt * steps.size().
struct ControlTrajectory {
  double dt_ns = 1.0;
  std::vector<ControlKnobs> steps;

  double duration_ns() const { return dt_ns * double(steps.size()); }
  double duration_us() const { return duration_ns() * 1e-3; }
  bool finite() const;
};

/// Two-pole normalized double-exponential smoothing filter.
/// alpha = exp(-pi Bw / Fs), a1 = (1-alpha)^2, b1 = -2 alpha, b2 = alpha^2;
/// the recurrence c_n = a1 c_n^prop - b1 c_{n-1} - b2 c_{n-2} then has unit
/// DC gain: a1 / (1 + b1 + b2) = 1.
struct FilterConfig {
  double bandwidth_mhz = 10.0;
  double sample_rate_mhz = 1000.0;
  double alpha = 0.0;
  double a1 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  static FilterConfig from_bandwidth(double bandwidth_mhz, double sample_rate_mhz);
  static FilterConfig for_dt(double bandwidth_mhz, double dt_ns) {
    return from_bandwidth(bandwidth_mhz, 1000.0 / dt_ns);
  }
};

/// One filter update. The recurrence acts on the five amplitude knobs
/// (g, delta1, delta2, f1, f2); phases pass through unfiltered.
ControlKnobs filter_step(const ControlKnobs& proposed, const ControlKnobs& prev,
                         const ControlKnobs& prev2, const FilterConfig& cfg);

/// Filter magnitude response |a1 / (1 + b1 e^{-iw} + b2 e^{-2iw})| at
/// w = 2 pi freq / sample_rate. Throws std::domain_error outside [0, Fs/2].
double filter_gain(double freq_mhz, const FilterConfig& cfg);

/// Gaussian actuation noise, sigma in MHz, applied to the six amplitude
/// channels (eta, g, delta1, delta2, f1, f2); phases are never perturbed.
/// Draw order per step is fixed: eta, g, delta1, delta2, f1, f2.
struct NoiseModel {
  double sigma_mhz = 1.0;
  uint64_t seed = 0;
  /// Hold one eta draw for a whole trajectory instead of per-step draws.
  bool eta_per_episode = false;
};

struct PerturbedTrajectory {
  ControlTrajectory traj;
  std::vector<double> eta_mhz;  // per-step anharmonicity eta + d_eta(t_k)
};

/// Independent N(0, sigma) draws added to g, delta1, delta2, f1, f2 at
/// every step, plus the per-step eta sequence. Deterministic given seed.
PerturbedTrajectory perturb(const ControlTrajectory& traj, const GmonModel& model,
                            const NoiseModel& noise);

/// Boundary penalty inputs, MHz^2.
struct BoundaryValues {
  double g0_sq = 0.0;
  double gT_sq = 0.0;
  double f0_sq_sum = 0.0;
  double fT_sq_sum = 0.0;
  double total() const { return g0_sq + gT_sq + f0_sq_sum + fT_sq_sum; }
};

/// g(0)^2, g(T)^2, f1(0)^2+f2(0)^2, f1(T)^2+f2(T)^2. Throws on an empty
/// trajectory.
BoundaryValues boundary_values(const ControlTrajectory& traj);

/// Trajectory file format: JSON {"version":1,"dt_ns":..,"steps":[{g,d1,d2,
/// f1,f2,p1,p2},..]}; doubles round-trip bit-exactly.
std::string to_json_string(const ControlTrajectory& traj);
ControlTrajectory trajectory_from_json_string(const std::string& text);
void save_trajectory(const ControlTrajectory& traj, const std::string& path);
ControlTrajectory load_trajectory(const std::string& path);

}  // namespace ufoctl::control

#endif  // UFOCTL_CONTROL_HPP_

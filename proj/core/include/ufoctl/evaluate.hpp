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

#ifndef UFOCTL_EVALUATE_HPP_
#define UFOCTL_EVALUATE_HPP_

#include <functional>
#include <vector>

#include "ufoctl/dynamics.hpp"

namespace ufoctl::evaluate {

/// Monte-Carlo channel estimate: the Omega0-block operators of the
/// propagator under independent control-noise draws. The block is
/// trace-decreasing when leakage is present; the defect is reported.
struct NoisyChannel {
  std::vector<Eigen::Matrix4cd> samples;
  double mean_trace_defect = 0.0;  // 1 - mean Tr(B^dagger B)/4

  /// E(X) = (1/M) sum_m U_m X U_m^dagger extended linearly to any 4x4 X.
  Eigen::Matrix4cd apply(const Eigen::Matrix4cd& x) const;
};

NoisyChannel noisy_channel(const control::ControlTrajectory& traj, const gmon::GmonModel& model,
                           const control::NoiseModel& noise, int n_samples,
                           dynamics::Space space);

using ChannelFn = std::function<Eigen::Matrix4cd(const Eigen::Matrix4cd&)>;

/// Average gate fidelity from the two-qubit Pauli sum:
/// F = [sum_j Tr(U_t U_j^+ U_t^+ E(U_j)) + d^2] / (d^2 (d+1)), d = 4.
double average_fidelity_nielsen(const ChannelFn& channel, const Eigen::Matrix4cd& target);
double average_fidelity_nielsen(const NoisyChannel& channel, const Eigen::Matrix4cd& target);

/// Monte-Carlo Haar average of <psi| U_t^+ E(|psi><psi|) U_t |psi> over
/// normalized complex-Gaussian states.
double average_fidelity_haar_mc(const NoisyChannel& channel, const Eigen::Matrix4cd& target,
                                int n_states, uint64_t seed);

/// The sixteen two-qubit Pauli operators (Tr(U_j U_k^+) = 4 delta_jk).
const std::vector<Eigen::Matrix4cd>& pauli_basis();

struct RobustnessSpec {
  double epsilon0 = 0.007;
  std::vector<double> sigma_grid_mhz;  // e.g. 0.1 .. 3.5
  int samples_per_point = 60;
};

struct EvaluationReport {
  double f_ave_haar = 0.0;     // sample mean of gate fidelities
  double f_ave_nielsen = 0.0;  // Pauli-sum average fidelity of the channel
  double sigma_fidelity = 0.0; // population variance of the sampled fidelities
  std::vector<double> per_sample_fidelities;
};

/// Gate-fidelity statistics over n noise draws at the given sigma.
EvaluationReport fidelity_variance(const control::ControlTrajectory& traj,
                                   const gmon::GmonModel& model,
                                   const Eigen::Matrix4cd& target, double sigma_mhz, int n,
                                   uint64_t seed, dynamics::Space space);

/// |F_ave - F_ideal| < epsilon0.
bool robustness_check(const EvaluationReport& report, double f_ideal,
                      const RobustnessSpec& spec);

}  // namespace ufoctl::evaluate

#endif  // UFOCTL_EVALUATE_HPP_

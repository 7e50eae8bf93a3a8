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

#ifndef UFOCTL_DYNAMICS_HPP_
#define UFOCTL_DYNAMICS_HPP_

#include <optional>
#include <vector>

#include "ufoctl/control.hpp"
#include "ufoctl/gmon.hpp"
#include "ufoctl/qops.hpp"

namespace ufoctl::dynamics {

using qops::Matrix;

enum class Space { full, qubit };
enum class Frame { bare, dressed };

struct PropagationResult {
  Matrix unitary;                 // 9x9 (full) or 4x4 (qubit)
  std::vector<Matrix> per_step;   // filled when keep_steps is set
  Frame frame = Frame::bare;
};

/// exp(-i H t) for Hermitian H via eigendecomposition (accurate to
/// machine precision per step).
Matrix expm_hermitian(const Matrix& h, double t_us);

/// Time-ordered product U = E_{N-1} ... E_1 E_0 with E_k = exp(-i H(t_k) dt).
/// With a noise model the trajectory is perturbed first (sigma = 0 goes
/// through the same path and reproduces the noiseless propagator).
/// Throws on non-finite Hamiltonian entries.
PropagationResult propagate(const control::ControlTrajectory& traj,
                            const gmon::GmonModel& model,
                            const control::NoiseModel* noise, Space space,
                            bool keep_steps = false);

/// Propagation of an already-realized trajectory with an explicit per-step
/// anharmonicity sequence (nullptr keeps the model value throughout).
PropagationResult propagate_with_eta(const control::ControlTrajectory& traj,
                                     const gmon::GmonModel& model,
                                     const std::vector<double>* eta_mhz, Space space,
                                     bool keep_steps = false);

/// F = |Tr(U^dagger target)|^2 / 16 for 4x4 operators; global-phase
/// invariant. Throws on dimension mismatch.
double gate_fidelity(const Matrix& u, const Matrix& target);

/// Exact-leakage oracle. Amplitude rows: sum of |<l|U|m>| over l outside
/// Omega0; population rows: sum of |<l|U|m>|^2. max/mean taken over the
/// four computational initial states. In the dressed frame U is
/// conjugated by the endpoint rotations: exp(-S(T)) U exp(S(0)) with
/// S = S1 + S2.
struct LeakageReport {
  double max_amplitude = 0.0;
  double mean_amplitude = 0.0;
  double max_population = 0.0;
  double mean_population = 0.0;
};
LeakageReport exact_leakage(const control::ControlTrajectory& traj,
                            const gmon::GmonModel& model, Frame frame);
LeakageReport leakage_of_unitary(const Matrix& u9, const qops::SubspaceLayout& layout);

/// 1 - smallest singular value of the Omega0 block; 0 iff the block is
/// exactly unitary.
double qubit_block_unitarity_defect(const Matrix& u9);

/// Omega0 block of a 9x9 operator as a 4x4 matrix (basis order
/// |00>,|01>,|10>,|11>).
Eigen::Matrix4cd omega0_block(const Matrix& u9, const qops::SubspaceLayout& layout);

}  // namespace ufoctl::dynamics

#endif  // UFOCTL_DYNAMICS_HPP_

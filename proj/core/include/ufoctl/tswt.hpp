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

#ifndef UFOCTL_TSWT_HPP_
#define UFOCTL_TSWT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "ufoctl/control.hpp"
#include "ufoctl/gmon.hpp"
#include "ufoctl/qops.hpp"

namespace ufoctl::tswt {

using qops::Matrix;
using qops::SubspaceLayout;

/// Per-timestep rotation generators and effective Hamiltonians.
/// s1 and s2 are anti-Hermitian and block-off-diagonal; h_eff_od carries
/// the residual inter-subspace coupling left after the second-order
/// rotation and h_eff_d the block-diagonal effective Hamiltonian.
struct TswtFrame {
  Matrix s1;
  Matrix s2;
  Matrix h_eff_d;
  Matrix h_eff_od;
  double t_us = 0.0;
};

/// First-order generator: S1^{a,b} = H2^{a,b} / (E_b - E_a) for a != b.
/// Requires H0 diagonal with subspace-constant energies; throws
/// std::domain_error when two distinct subspaces are degenerate.
Matrix s1_generator(const Matrix& h0, const Matrix& h2, const SubspaceLayout& layout);

/// Second-order generator:
/// S2^{a,b} = (H1^a H2^{a,b} - H2^{a,b} H1^b - i dH2/dt^{a,b}) / (E_b - E_a)^2.
Matrix s2_generator(const Matrix& h0, const Matrix& h1, const Matrix& h2,
                    const Matrix& dh2_dt, const SubspaceLayout& layout);

/// Block-diagonal and residual block-off-diagonal effective Hamiltonians
/// after the second-order rotation (diagonal part through third order in
/// the coupling, off-diagonal residual at third order).
std::pair<Matrix, Matrix> effective_hamiltonians(const Matrix& h0, const Matrix& h1,
                                                 const Matrix& h2, const Matrix& dh1_dt,
                                                 const Matrix& dh2_dt, const Matrix& d2h2_dt2,
                                                 const SubspaceLayout& layout);

/// Frames for every step of a trajectory. Time derivatives of H1 and H2
/// use central differences on the step grid, one-sided at the ends; the
/// second derivative replicates its neighbor value at the ends.
/// An optional per-step eta sequence overrides the model anharmonicity.
std::vector<TswtFrame> frames_along(const control::ControlTrajectory& traj,
                                    const gmon::GmonModel& model,
                                    const std::vector<double>* eta_seq = nullptr);

/// Coherent-leakage bound ledger (dimensionless amplitudes).
/// l_tot is the retained three-term form; derivative_terms carries the
/// dropped boundary-derivative middle terms of the five-term form so the
/// dominance check can be audited.
struct LeakageLedger {
  double boundary_start = 0.0;  // ||H_od(0)|| / gap(0)
  double boundary_end = 0.0;    // ||H_od(T)|| / gap(T)
  double derivative_terms = 0.0;  // 2||dH_od/dt||/gap^2 summed over both ends
  double integral_term = 0.0;     // int ||d2H_od/dt2|| / gap^2 dt
  double l_tot = 0.0;             // boundary_start + boundary_end + integral_term

  std::string to_json_string() const;
};

/// Evaluate the ledger over >= 3 frames; throws std::invalid_argument
/// otherwise. The gap is the constant layout gap unless dynamic_gap is
/// set, in which case the instantaneous diagonal gap of h_eff_d is used.
LeakageLedger leakage_bound(const std::vector<TswtFrame>& frames, double dt_ns,
                            const SubspaceLayout& layout, bool dynamic_gap = false);

/// Non-adiabatic leakage bound on a uniform s-grid over [0,1].
/// hd_frames must hold only the time-varying block-diagonal part (the
/// static gap Hamiltonian removed): the commutator terms of the bound are
/// meant for the slow intra-subspace drive, and the static part would
/// contribute ||[H0, H_od]|| ~ gap * ||H_od|| and void the estimate.
/// Throws std::invalid_argument for T <= 0 or fewer than 3 frames.
double adiabatic_bound(const std::vector<Matrix>& hd_frames,
                       const std::vector<Matrix>& hod_frames,
                       const std::vector<double>& gap_frames, double t_us);

/// Convenience: time-varying block-diagonal parts (h_eff_d - H0) and
/// residual off-diagonal parts of a frame sequence.
std::vector<Matrix> hd_time_varying(const std::vector<TswtFrame>& frames, const Matrix& h0);
std::vector<Matrix> hod_parts(const std::vector<TswtFrame>& frames);

/// Incremental prefix ledger used by the step-by-step environment: append
/// the per-step (H1, H2) decomposition and read off the integral term of
/// the prefix trajectory. The accumulated frames match frames_along on
/// the full trajectory exactly, so prefix increments telescope to the
/// whole-trajectory ledger.
class LedgerAccumulator {
 public:
  LedgerAccumulator(const Matrix& h0, double dt_ns, const SubspaceLayout& layout);

  void append(Matrix h1, Matrix h2);
  int size() const { return int(h1s_.size()); }
  /// Integral term of the prefix ledger; 0 for < 3 frames.
  double integral_term() const;
  /// Boundary terms of the prefix ledger; 0 for < 1 frame.
  double boundary_terms() const;
  const std::vector<TswtFrame>& frames() const { return frames_; }

 private:
  void rebuild_frame(int j);

  Matrix h0_;
  double dt_ns_;
  SubspaceLayout layout_;
  std::vector<Matrix> h1s_, h2s_;
  std::vector<TswtFrame> frames_;
};

}  // namespace ufoctl::tswt

#endif  // UFOCTL_TSWT_HPP_

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

#ifndef UFOCTL_GMON_HPP_
#define UFOCTL_GMON_HPP_

#include <array>

#include "ufoctl/qops.hpp"

namespace ufoctl::gmon {

using qops::Matrix;
using qops::SubspaceLayout;

/// Unit conventions: control amplitudes are cyclic frequencies in MHz,
/// phases in radians. Hamiltonians are stored in angular units (rad/us),
/// i.e. a knob f[MHz] enters as 2*pi*f, and time is measured in us, so a
/// constant drive accumulates phase 2*pi*f[MHz]*t[us].
inline double angular(double mhz) { return qops::kTwoPi * mhz; }

struct GmonModel {
  double eta_mhz = 200.0;  // anharmonicity
  SubspaceLayout layout = SubspaceLayout::make(200.0);

  static GmonModel standard(double eta_mhz = 200.0) {
    return GmonModel{eta_mhz, SubspaceLayout::make(eta_mhz)};
  }
};

/// The seven control knobs of one piecewise-constant step.
struct ControlKnobs {
  double g_mhz = 0.0;
  double delta1_mhz = 0.0;
  double delta2_mhz = 0.0;
  double f1_mhz = 0.0;
  double f2_mhz = 0.0;
  double phi1_rad = 0.0;
  double phi2_rad = 0.0;

  std::array<double, 7> as_array() const {
    return {g_mhz, delta1_mhz, delta2_mhz, f1_mhz, f2_mhz, phi1_rad, phi2_rad};
  }
  static ControlKnobs from_array(const std::array<double, 7>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  bool finite() const;
};

/// Amplitude range of Table-style validation (|g|,|delta|,|f| <= 20 MHz).
inline constexpr double kAmplitudeRangeMhz = 20.0;
bool within_range(const ControlKnobs& k, double max_mhz = kAmplitudeRangeMhz);

/// 9x9 two-mode Hamiltonian in angular units:
///   (eta/2) sum_j n_j(n_j-1) + g (a2^+ a1 + a1^+ a2) + sum_j delta_j n_j
///   + sum_j i f_j (a_j e^{-i phi_j} - a_j^+ e^{+i phi_j}).
/// Throws std::invalid_argument on non-finite knobs.
Matrix assemble_h(const ControlKnobs& knobs, const GmonModel& model);

/// Static part H0 = (eta/2) sum_j n_j(n_j-1).
Matrix h0(const GmonModel& model);

/// Split H into (H0, H1, H2): H0 the static gap term, H1 the intra-subspace
/// couplings of H - H0, H2 the remaining inter-subspace couplings.
/// The three parts sum to H exactly.
std::array<Matrix, 3> decompose(const Matrix& h, const GmonModel& model);

/// 4x4 qubit-subspace Hamiltonian in angular units with basis order
/// |00>,|01>,|10>,|11> and sigma_z |0> = +|0>:
///   (g/2)(X1 X2 + Y1 Y2) + sum_j [ (delta_j/2) Z_j
///                                  + f_j (sin(phi_j) X_j - cos(phi_j) Y_j) ].
/// The microwave term keeps the e^{-i phi} phase convention of assemble_h,
/// so the projected matrix agrees with the Omega0 block of the 9x9 build
/// (up to the traceless-Z constant shift of the detuning term).
Eigen::Matrix4cd project_to_qubits(const ControlKnobs& knobs, const GmonModel& model);

}  // namespace ufoctl::gmon

#endif  // UFOCTL_GMON_HPP_

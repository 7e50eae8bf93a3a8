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

#ifndef UFOCTL_QOPS_HPP_
#define UFOCTL_QOPS_HPP_

#include <array>
#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace ufoctl::qops {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Two bosonic modes, hard-truncated at occupation 2 (9 basis states).
/// Basis order is mode-1-major with mode 2 fastest: index = 3*n1 + n2.
/// The three energy subspaces:
///   omega0 = {|00>,|01>,|10>,|11>}   computational subspace
///   omega1 = {|20>,|21>,|12>,|02>}   first excited subspace
///   omega2 = {|22>}                  top subspace
/// `gap` is the Omega0 <-> Omega1 energy distance in rad/us.
struct SubspaceLayout {
  int levels_per_mode = 3;
  std::array<int, 4> omega0{0, 1, 3, 4};
  std::array<int, 4> omega1{6, 7, 5, 2};
  std::array<int, 1> omega2{8};
  double gap = 0.0;

  static SubspaceLayout make(double eta_mhz);

  int dim() const { return levels_per_mode * levels_per_mode; }
  /// Subspace label (0, 1 or 2) of a basis index.
  int subspace_of(int index) const;
  /// Subspace energy E_alpha = alpha * gap (rad/us).
  double energy(int alpha) const { return gap * alpha; }
  /// Orthogonal projector onto Omega_alpha.
  Matrix projector(int alpha) const;
};

/// Basis index of |n1 n2>.
inline int fock_index(int n1, int n2) { return 3 * n1 + n2; }

/// 9x9 annihilation operator of the given mode (1 or 2), hard truncation
/// at level 2. Throws std::invalid_argument on a bad mode index.
Matrix annihilation(int mode, const SubspaceLayout& layout);

/// n_mode = a^dagger a; diagonal with entries 0,1,2.
Matrix number_op(int mode, const SubspaceLayout& layout);

/// Split H into (intra-subspace part, inter-subspace part). The two parts
/// sum to H exactly. Warns (stderr) on a non-Hermitian input but still
/// splits.
std::pair<Matrix, Matrix> block_split(const Matrix& h, const SubspaceLayout& layout);

/// ||A - A^dagger|| below tolerance.
bool is_hermitian(const Matrix& a, double tol = 1e-10);

/// ||A^dagger A - I|| (spectral norm).
double unitarity_defect(const Matrix& a);

/// Largest singular value.
double spectral_norm(const Matrix& a);

}  // namespace ufoctl::qops

#endif  // UFOCTL_QOPS_HPP_

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

#include "ufoctl/qops.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace ufoctl::qops {

SubspaceLayout SubspaceLayout::make(double eta_mhz) {
  SubspaceLayout layout;
  layout.gap = kTwoPi * eta_mhz;
  return layout;
}

int SubspaceLayout::subspace_of(int index) const {
  for (int i : omega0)
    if (i == index) return 0;
  for (int i : omega1)
    if (i == index) return 1;
  for (int i : omega2)
    if (i == index) return 2;
  throw std::out_of_range("basis index outside the 9-state space");
}

Matrix SubspaceLayout::projector(int alpha) const {
  Matrix p = Matrix::Zero(dim(), dim());
  auto fill = [&p](auto& idx) {
    for (int i : idx) p(i, i) = 1.0;
  };
  switch (alpha) {
    case 0: fill(omega0); break;
    case 1: fill(omega1); break;
    case 2: fill(omega2); break;
    default: throw std::invalid_argument("subspace label must be 0, 1 or 2");
  }
  return p;
}

Matrix annihilation(int mode, const SubspaceLayout& layout) {
  if (mode != 1 && mode != 2) {
    throw std::invalid_argument("mode index must be 1 or 2");
  }
  const int d = layout.dim();
  Matrix a = Matrix::Zero(d, d);
  for (int n1 = 0; n1 < 3; ++n1) {
    for (int n2 = 0; n2 < 3; ++n2) {
      if (mode == 1 && n1 > 0) {
        // a_1 |n1 n2> = sqrt(n1) |n1-1, n2>
        a(fock_index(n1 - 1, n2), fock_index(n1, n2)) = std::sqrt(double(n1));
      }
      if (mode == 2 && n2 > 0) {
        a(fock_index(n1, n2 - 1), fock_index(n1, n2)) = std::sqrt(double(n2));
      }
    }
  }
  return a;
}

Matrix number_op(int mode, const SubspaceLayout& layout) {
  const Matrix a = annihilation(mode, layout);
  return a.adjoint() * a;
}

std::pair<Matrix, Matrix> block_split(const Matrix& h, const SubspaceLayout& layout) {
  if (!is_hermitian(h)) {
    std::cerr << "ufoctl: block_split: input is not Hermitian; splitting anyway\n";
  }
  const int d = layout.dim();
  Matrix diag = Matrix::Zero(d, d);
  Matrix off = Matrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const int sr = layout.subspace_of(r);
    for (int c = 0; c < d; ++c) {
      if (sr == layout.subspace_of(c)) {
        diag(r, c) = h(r, c);
      } else {
        off(r, c) = h(r, c);
      }
    }
  }
  return {diag, off};
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double unitarity_defect(const Matrix& a) {
  const Matrix g = a.adjoint() * a - Matrix::Identity(a.cols(), a.cols());
  return spectral_norm(g);
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace ufoctl::qops

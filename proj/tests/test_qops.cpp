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
#include "ufoctl/qops.hpp"

using namespace ufoctl;
using test_support::random_hermitian;

namespace {
const qops::SubspaceLayout kLayout = qops::SubspaceLayout::make(200.0);
}

TEST_CASE("annihilation matches Fock lowering rules") {
  const auto a1 = qops::annihilation(1, kLayout);
  const auto a2 = qops::annihilation(2, kLayout);

  // a1 |1,0> = |0,0>
  CHECK(std::abs(a1(qops::fock_index(0, 0), qops::fock_index(1, 0)) - 1.0) < 1e-15);
  // a1 |2,0> = sqrt(2) |1,0>
  CHECK(std::abs(a1(qops::fock_index(1, 0), qops::fock_index(2, 0)) - std::sqrt(2.0)) < 1e-15);
  // vacuum annihilation: a1 |0,m> = 0 for all m
  for (int m = 0; m < 3; ++m) {
    CHECK(a1.col(qops::fock_index(0, m)).norm() == 0.0);
  }
  // full matrices against the explicit Kronecker construction
  CHECK((a1 - test_support::a1_oracle()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((a2 - test_support::a2_oracle()).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(qops::annihilation(3, kLayout), std::invalid_argument);
  CHECK_THROWS_AS(qops::annihilation(0, kLayout), std::invalid_argument);
}

TEST_CASE("number operator is diagonal with occupation entries") {
  const auto n1 = qops::number_op(1, kLayout);
  const auto n2 = qops::number_op(2, kLayout);

  CHECK(std::abs(n2(qops::fock_index(0, 2), qops::fock_index(0, 2)) - 2.0) < 1e-15);
  for (int r = 0; r < 9; ++r) {
    for (int c = 0; c < 9; ++c) {
      if (r != c) {
        CHECK(std::abs(n1(r, c)) == 0.0);
        CHECK(std::abs(n2(r, c)) == 0.0);
      }
    }
  }
  CHECK(std::abs(n1.trace().real() - 9.0) < 1e-14);  // 0+1+2 three times
  CHECK(std::abs(n2.trace().real() - 9.0) < 1e-14);
}

TEST_CASE("truncated commutator [a, a^+]") {
  const auto a = qops::annihilation(1, kLayout);
  const qops::Matrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n1 = 0; n1 < 3; ++n1) {
    for (int n2 = 0; n2 < 3; ++n2) {
      const int idx = qops::fock_index(n1, n2);
      const double expected = n1 < 2 ? 1.0 : -2.0;  // hard-truncation edge
      CHECK(std::abs(comm(idx, idx).real() - expected) < 1e-14);
    }
  }
}

TEST_CASE("block_split keeps intra-subspace entries and reconstructs") {
  SUBCASE("diagonal input is purely intra-subspace") {
    qops::Matrix d = qops::Matrix::Zero(9, 9);
    for (int i = 0; i < 9; ++i) d(i, i) = i + 1.0;
    auto [diag, off] = qops::block_split(d, kLayout);
    CHECK((diag - d).cwiseAbs().maxCoeff() == 0.0);
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("pure inter-subspace entry goes entirely to the off part") {
    qops::Matrix h = qops::Matrix::Zero(9, 9);
    const int i20 = qops::fock_index(2, 0), i11 = qops::fock_index(1, 1);
    h(i20, i11) = 2.5;
    h(i11, i20) = 2.5;
    auto [diag, off] = qops::block_split(h, kLayout);
    CHECK(diag.cwiseAbs().maxCoeff() == 0.0);
    CHECK((off - h).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("random Hermitian reconstruction and linearity") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const auto h = random_hermitian(9, 1.0, 1000 + seed);
      auto [diag, off] = qops::block_split(h, kLayout);
      CHECK((diag + off - h).cwiseAbs().maxCoeff() < 1e-14);
      // structural zeros
      for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 9; ++c) {
          if (kLayout.subspace_of(r) == kLayout.subspace_of(c)) {
            CHECK(std::abs(off(r, c)) == 0.0);
          } else {
            CHECK(std::abs(diag(r, c)) == 0.0);
          }
        }
      }
      // idempotence and linearity
      const auto b = random_hermitian(9, 2.0, 2000 + seed);
      auto [diag_b, off_b] = qops::block_split(b, kLayout);
      auto [diag_ab, off_ab] = qops::block_split(h + b, kLayout);
      CHECK((diag_ab - diag - diag_b).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((off_ab - off - off_b).cwiseAbs().maxCoeff() < 1e-13);
      auto [diag2, off2] = qops::block_split(diag, kLayout);
      CHECK((diag2 - diag).cwiseAbs().maxCoeff() == 0.0);
      CHECK(off2.cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("projectors are orthogonal and complete") {
  const auto p0 = kLayout.projector(0);
  const auto p1 = kLayout.projector(1);
  const auto p2 = kLayout.projector(2);
  CHECK(((p0 + p1 + p2) - qops::Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p0 * p1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p1 * p2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p0 * p0 - p0).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(kLayout.projector(3), std::invalid_argument);
}

TEST_CASE("hermiticity and unitarity checks") {
  const auto h = random_hermitian(9, 1.0, 42);
  CHECK(qops::is_hermitian(h));
  qops::Matrix skew = h;
  skew(0, 1) += std::complex<double>(0, 1e-6);
  CHECK_FALSE(qops::is_hermitian(skew));

  CHECK(qops::unitarity_defect(qops::Matrix::Identity(9, 9)) < 1e-14);
  CHECK(qops::unitarity_defect(2.0 * qops::Matrix::Identity(4, 4)) > 1.0);
}

TEST_CASE("spectral norm agrees with power iteration") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_hermitian(9, 1.5, 300 + seed);
    const double lib = qops::spectral_norm(m);
    const double oracle = test_support::spectral_norm_oracle(m);
    CHECK(lib == doctest::Approx(oracle).epsilon(1e-6));
  }
}

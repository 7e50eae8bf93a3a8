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
#include "ufoctl/dynamics.hpp"
#include "ufoctl/targets.hpp"

using namespace ufoctl;

namespace {
const std::complex<double> kI{0.0, 1.0};

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::Matrix2cd pauli(char which) {
  Eigen::Matrix2cd m;
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

double phase_invariant_distance(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  return 1.0 - dynamics::gate_fidelity(a, b);
}
}  // namespace

TEST_CASE("n_gate basics") {
  CHECK((targets::n_gate(0.0, 0.0).matrix - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <
        1e-14);

  SUBCASE("unitary for random angles") {
    for (int i = 0; i < 10; ++i) {
      const auto t = targets::n_gate(0.31 * i, 0.17 * i * i);
      CHECK(qops::unitarity_defect(t.matrix) < 1e-12);
    }
  }

  SUBCASE("commuting factorization") {
    const double alpha = 1.1, gamma = 0.6;
    const auto direct = targets::n_gate(alpha, gamma).matrix;
    const Eigen::Matrix4cd xx = kron2(pauli('x'), pauli('x'));
    const Eigen::Matrix4cd yy = kron2(pauli('y'), pauli('y'));
    const Eigen::Matrix4cd zz = kron2(pauli('z'), pauli('z'));
    const auto factored = (test_support::expm_taylor(kI * alpha * xx) *
                           test_support::expm_taylor(kI * alpha * yy) *
                           test_support::expm_taylor(kI * gamma * zz))
                              .eval();
    CHECK((direct - factored).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("gamma = pi/2 rewrite holds up to a global phase") {
    const double alpha = 2.2;
    const auto lhs = targets::n_gate(alpha, M_PI / 2.0).matrix;
    const Eigen::Matrix4cd xxyy = kron2(pauli('x'), pauli('x')) + kron2(pauli('y'), pauli('y'));
    const Eigen::Matrix2cd z = pauli('z');
    const Eigen::Matrix2cd zrot = test_support::expm_taylor((-kI * (M_PI / 2.0) * z).eval());
    const Eigen::Matrix4cd rhs =
        -test_support::expm_taylor((kI * alpha * xxyy).eval()) * kron2(zrot, Eigen::Matrix2cd::Identity()) *
        kron2(Eigen::Matrix2cd::Identity(), zrot);
    CHECK(phase_invariant_distance(lhs, rhs) < 1e-12);
  }

  SUBCASE("N(pi/4, pi/4) is SWAP up to a global phase") {
    const auto n = targets::n_gate(M_PI / 4.0, M_PI / 4.0).matrix;
    const auto swap = targets::canonical_gate("SWAP").matrix;
    CHECK(phase_invariant_distance(n, swap) < 1e-12);
  }

  SUBCASE("pi periodicity in alpha") {
    const auto a = targets::n_gate(0.7, 0.9).matrix;
    const auto b = targets::n_gate(0.7 + M_PI, 0.9).matrix;
    const auto npi0 = targets::n_gate(M_PI, 0.0).matrix;
    CHECK((b - a * npi0).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("canonical gates") {
  const auto cz = targets::canonical_gate("CZ").matrix;
  CHECK(cz(0, 0) == 1.0);
  CHECK(cz(3, 3) == -1.0);
  CHECK((cz - Eigen::Matrix4cd(cz.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

  const auto cnot = targets::canonical_gate("CNOT").matrix;
  CHECK(((cnot * cnot) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);

  const auto swap = targets::canonical_gate("SWAP").matrix;
  const auto fswap = targets::canonical_gate("FSWAP").matrix;
  CHECK((fswap - swap * cz).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(qops::unitarity_defect(fswap) < 1e-14);
  CHECK(((fswap * fswap) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);

  const auto iswap = targets::canonical_gate("ISWAP").matrix;
  CHECK(std::abs(iswap(2, 1) - kI) < 1e-14);

  CHECK_THROWS_AS(targets::canonical_gate("TOFFOLI"), std::invalid_argument);
}

TEST_CASE("parse_target") {
  CHECK(targets::parse_target("CZ").label == "CZ");
  const auto n = targets::parse_target("N:2.2:1.5708");
  CHECK(n.alpha == doctest::Approx(2.2));
  CHECK(n.gamma == doctest::Approx(1.5708));
  CHECK_THROWS_AS(targets::parse_target("N:abc:1"), std::invalid_argument);
  CHECK_THROWS_AS(targets::parse_target("N:1.0"), std::invalid_argument);
  CHECK_THROWS_AS(targets::parse_target("GARBAGE"), std::invalid_argument);
}

TEST_CASE("synthesis reference record") {
  const auto ref = targets::synthesis_runtime();
  CHECK(ref.total_ns == 215.0);
  CHECK(ref.n_single_qubit == 5);
  CHECK(ref.n_two_qubit == 3);
  CHECK(ref.depth == 7);
  // the naive per-gate sum differs from the quoted total; both are kept
  CHECK(ref.naive_sum_ns() == 235.0);
  CHECK(ref.naive_sum_ns() != ref.total_ns);
}

TEST_CASE("analytic pulse program for N(alpha, alpha, pi/2)") {
  const auto model = gmon::GmonModel::standard();

  SUBCASE("alpha = 2.2 runs concurrently in about 35 ns") {
    const auto traj = targets::xy_gate_program(2.2, 20.0, 20.0, 1.0);
    CHECK(traj.duration_ns() == doctest::Approx(2.2 / (M_PI * 20.0) * 1000.0).epsilon(1e-12));
    CHECK(traj.duration_ns() < 40.0);
    const auto u = dynamics::propagate(traj, model, nullptr, dynamics::Space::qubit).unitary;
    const auto target = targets::n_gate(2.2, M_PI / 2.0).matrix;
    CHECK(1.0 - dynamics::gate_fidelity(u, target) < 1e-9);
  }

  SUBCASE("small alpha appends a detuning segment and still hits the gate") {
    const auto traj = targets::xy_gate_program(0.1, 20.0, 20.0, 1.0);
    const auto u = dynamics::propagate(traj, model, nullptr, dynamics::Space::qubit).unitary;
    const auto target = targets::n_gate(0.1, M_PI / 2.0).matrix;
    CHECK(1.0 - dynamics::gate_fidelity(u, target) < 1e-9);
    CHECK(traj.duration_ns() < 60.0);
  }

  SUBCASE("alpha = 0 is the pure Z segment") {
    const auto traj = targets::xy_gate_program(0.0, 20.0, 20.0, 1.0);
    const auto u = dynamics::propagate(traj, model, nullptr, dynamics::Space::qubit).unitary;
    const auto target = targets::n_gate(0.0, M_PI / 2.0).matrix;
    CHECK(1.0 - dynamics::gate_fidelity(u, target) < 1e-9);
  }

  SUBCASE("range checks") {
    CHECK_THROWS_AS(targets::xy_gate_program(1.0, 0.0, 20.0, 1.0), std::invalid_argument);
    const auto traj = targets::xy_gate_program(2.2, 20.0, 20.0, 1.0);
    for (const auto& k : traj.steps) CHECK(gmon::within_range(k));
  }
}

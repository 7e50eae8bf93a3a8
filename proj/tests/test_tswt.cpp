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
#include "ufoctl/tswt.hpp"

using namespace ufoctl;
using test_support::band_limited_trajectory;
using test_support::leakage_ensemble_trajectory;
using test_support::expm_taylor;
using test_support::random_hermitian;

namespace {

const gmon::GmonModel kModel = gmon::GmonModel::standard();
const std::complex<double> kI{0.0, 1.0};

struct RandomParts {
  qops::Matrix h0, h1, h2;
};

/// Random static decomposition from control knobs of amplitude eps_mhz,
/// so the coupling scale matches the physical meaning of eps.
RandomParts random_parts(double eps_mhz, uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-eps_mhz, eps_mhz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  gmon::ControlKnobs k{u(eng), u(eng), u(eng), u(eng), u(eng), phase(eng), phase(eng)};
  RandomParts p;
  const auto parts = gmon::decompose(gmon::assemble_h(k, kModel), kModel);
  p.h0 = parts[0];
  p.h1 = parts[1];
  p.h2 = parts[2];
  return p;
}

/// Abstract random decomposition (dense blocks) at a given rad/us scale.
RandomParts random_dense_parts(double scale, uint64_t seed) {
  RandomParts p;
  p.h0 = gmon::h0(kModel);
  auto [d, od] = qops::block_split(random_hermitian(9, scale, seed), kModel.layout);
  p.h1 = d;
  p.h2 = od;
  return p;
}

}  // namespace

TEST_CASE("s1 generator basics") {
  const auto h0 = gmon::h0(kModel);
  SUBCASE("zero coupling gives zero rotation") {
    const auto s1 = tswt::s1_generator(h0, qops::Matrix::Zero(9, 9), kModel.layout);
    CHECK(s1.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("single element divided by the gap") {
    const double h = 3.7;
    qops::Matrix h2 = qops::Matrix::Zero(9, 9);
    const int m = qops::fock_index(1, 1);   // Omega0
    const int l = qops::fock_index(2, 0);   // Omega1
    h2(m, l) = h;
    h2(l, m) = h;
    const auto s1 = tswt::s1_generator(h0, h2, kModel.layout);
    CHECK(s1(m, l).real() == doctest::Approx(h / (qops::kTwoPi * 200.0)).epsilon(1e-13));
    CHECK(s1(l, m).real() == doctest::Approx(-h / (qops::kTwoPi * 200.0)).epsilon(1e-13));
  }

  SUBCASE("first-order diagonalization identity and anti-Hermiticity") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto p = random_dense_parts(qops::kTwoPi * 15.0, 50 + seed);
      const auto s1 = tswt::s1_generator(p.h0, p.h2, kModel.layout);
      CHECK((s1 + s1.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      const qops::Matrix residual = p.h0 * s1 - s1 * p.h0 + p.h2;
      CHECK(residual.cwiseAbs().maxCoeff() < 1e-12);
      // block-off-diagonal structure
      auto [d, od] = qops::block_split(s1, kModel.layout);
      CHECK(d.cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("degenerate gap raises") {
    qops::SubspaceLayout degenerate = kModel.layout;
    const qops::Matrix zero = qops::Matrix::Zero(9, 9);
    CHECK_THROWS_AS(tswt::s1_generator(zero, zero, degenerate), std::domain_error);
  }
}

TEST_CASE("s2 generator basics") {
  const auto h0 = gmon::h0(kModel);
  const qops::Matrix zero = qops::Matrix::Zero(9, 9);

  SUBCASE("vanishes without intra-subspace drive and time dependence") {
    const auto p = random_dense_parts(qops::kTwoPi * 10.0, 7);
    const auto s2 = tswt::s2_generator(h0, zero, p.h2, zero, kModel.layout);
    CHECK(s2.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("pure time-derivative case reduces entrywise") {
    const auto p = random_dense_parts(qops::kTwoPi * 10.0, 8);
    const auto q = random_dense_parts(qops::kTwoPi * 2.0, 9);
    const auto s2 = tswt::s2_generator(h0, zero, p.h2, q.h2, kModel.layout);
    const double gap = kModel.layout.gap;
    for (int r = 0; r < 9; ++r) {
      for (int c = 0; c < 9; ++c) {
        const int sr = kModel.layout.subspace_of(r), sc = kModel.layout.subspace_of(c);
        if (sr == sc) continue;
        const double de = kModel.layout.energy(sc) - kModel.layout.energy(sr);
        const std::complex<double> expected = -kI * q.h2(r, c) / (de * de);
        CHECK(std::abs(s2(r, c) - expected) < 1e-13 * gap);
      }
    }
  }

  SUBCASE("second-order diagonalization identity") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto p = random_dense_parts(qops::kTwoPi * 15.0, 100 + seed);
      const auto dp = random_dense_parts(qops::kTwoPi * 5.0, 200 + seed);
      const auto s1 = tswt::s1_generator(p.h0, p.h2, kModel.layout);
      const auto s2 = tswt::s2_generator(p.h0, p.h1, p.h2, dp.h2, kModel.layout);
      // S1 is linear in H2, so its time derivative is the generator of dH2.
      const auto ds1 = tswt::s1_generator(p.h0, dp.h2, kModel.layout);
      const qops::Matrix residual =
          (p.h0 * s2 - s2 * p.h0) + (p.h1 * s1 - s1 * p.h1) - kI * ds1;
      CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
      CHECK((s2 + s2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("effective Hamiltonians: trivial and structural properties") {
  const auto h0 = gmon::h0(kModel);
  const qops::Matrix zero = qops::Matrix::Zero(9, 9);

  SUBCASE("all controls zero") {
    auto [hd, hod] = tswt::effective_hamiltonians(h0, zero, zero, zero, zero, zero,
                                                  kModel.layout);
    CHECK((hd - h0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(hod.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("outputs are Hermitian with the right block structure") {
    const auto p = random_dense_parts(qops::kTwoPi * 15.0, 11);
    const auto d1 = random_dense_parts(qops::kTwoPi * 4.0, 12);
    const auto d2 = random_dense_parts(qops::kTwoPi * 4.0, 13);
    const auto dd2 = random_dense_parts(qops::kTwoPi * 3.0, 14);
    auto [hd, hod] = tswt::effective_hamiltonians(p.h0, p.h1, p.h2, d1.h1, d2.h2, dd2.h2,
                                                  kModel.layout);
    CHECK((hd - hd.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((hod - hod.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    auto [hd_d, hd_od] = qops::block_split(hd, kModel.layout);
    auto [hod_d, hod_od] = qops::block_split(hod, kModel.layout);
    CHECK(hd_od.cwiseAbs().maxCoeff() == 0.0);
    CHECK(hod_d.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("second-order diagonal correction with H1 = 0") {
    // model-structured coupling (no direct Omega0 <-> Omega2 element), so
    // no third-order diagonal route survives and the shift is exact
    const auto p = random_parts(12.0, 21);
    auto [hd, hod] =
        tswt::effective_hamiltonians(h0, zero, p.h2, zero, zero, zero, kModel.layout);
    const int i11 = qops::fock_index(1, 1);
    double expected = 0.0;
    for (int l = 0; l < 9; ++l) {
      const int sl = kModel.layout.subspace_of(l);
      if (sl == 0) continue;
      expected -= std::norm(p.h2(i11, l)) / (kModel.layout.energy(sl) - 0.0);
    }
    CHECK(hd(i11, i11).real() == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("static exact-rotation oracle: residual and eigenvalues shrink as eps^4") {
  const auto h0 = gmon::h0(kModel);
  const qops::Matrix zero = qops::Matrix::Zero(9, 9);

  auto residuals = [&](double eps_mhz, uint64_t seed) {
    const auto p = random_parts(eps_mhz, seed);
    const auto s1 = tswt::s1_generator(h0, p.h2, kModel.layout);
    const auto s2 = tswt::s2_generator(h0, p.h1, p.h2, zero, kModel.layout);
    auto [hd, hod] =
        tswt::effective_hamiltonians(h0, p.h1, p.h2, zero, zero, zero, kModel.layout);
    const qops::Matrix h = p.h0 + p.h1 + p.h2;
    const qops::Matrix s = s1 + s2;
    qops::Matrix rotated = expm_taylor(-s) * h * expm_taylor(s);
    rotated = 0.5 * (rotated + qops::Matrix(rotated.adjoint()));  // strip oracle roundoff
    auto [rot_d, rot_od] = qops::block_split(rotated, kModel.layout);
    const double od_err = qops::spectral_norm(rot_od - hod);
    const double d_err = qops::spectral_norm(rot_d - hd);

    Eigen::SelfAdjointEigenSolver<qops::Matrix> exact(h), eff(hd);
    const double eig_err =
        (exact.eigenvalues() - eff.eigenvalues()).cwiseAbs().maxCoeff();
    return std::array<double, 4>{od_err, d_err, eig_err, qops::spectral_norm(hod)};
  };

  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto coarse = residuals(4.0, 400 + seed);
    const auto fine = residuals(2.0, 400 + seed);
    // residual against the exact rotation is one order beyond the kept
    // residual: the off-diagonal error must be well below ||h_eff_od||
    // (a sign error in any third-order term would make them comparable)
    CHECK(fine[0] < 0.3 * fine[3]);
    // fourth-order scaling under eps halving (slack around 16)
    CHECK(coarse[0] / fine[0] > 8.0);
    CHECK(coarse[0] / fine[0] < 34.0);
    CHECK(coarse[1] / fine[1] > 8.0);
    CHECK(coarse[1] / fine[1] < 34.0);
    CHECK(coarse[2] / fine[2] > 7.0);
    CHECK(coarse[2] / fine[2] < 36.0);
  }
}

TEST_CASE("residual off-diagonal norm scales as eps^3") {
  const auto h0 = gmon::h0(kModel);
  const qops::Matrix zero = qops::Matrix::Zero(9, 9);
  std::vector<double> eps = {5.0, 10.0, 20.0};
  std::vector<double> norms;
  for (double e : eps) {
    const auto p = random_parts(e, 777);
    auto [hd, hod] =
        tswt::effective_hamiltonians(h0, p.h1, p.h2, zero, zero, zero, kModel.layout);
    norms.push_back(qops::spectral_norm(hod));
  }
  const double slope1 = std::log(norms[1] / norms[0]) / std::log(2.0);
  const double slope2 = std::log(norms[2] / norms[1]) / std::log(2.0);
  CHECK(slope1 == doctest::Approx(3.0).epsilon(0.1));
  CHECK(slope2 == doctest::Approx(3.0).epsilon(0.1));
}

TEST_CASE("frames_along matches per-step construction and the accumulator") {
  const auto traj = band_limited_trajectory(40, 1.0, 10.0, 15.0, 31);
  const auto frames = tswt::frames_along(traj, kModel);
  REQUIRE(frames.size() == 40);

  // structure invariants on every frame
  for (const auto& f : frames) {
    CHECK((f.s1 + f.s1.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.s2 + f.s2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    auto [s1_d, s1_od] = qops::block_split(f.s1, kModel.layout);
    CHECK(s1_d.cwiseAbs().maxCoeff() == 0.0);
    auto [hod_d, hod_od] = qops::block_split(f.h_eff_od, kModel.layout);
    CHECK(hod_d.cwiseAbs().maxCoeff() == 0.0);
  }

  // incremental accumulator reproduces the batch frames exactly
  const qops::Matrix h_static = gmon::h0(kModel);
  tswt::LedgerAccumulator acc(h_static, traj.dt_ns, kModel.layout);
  for (const auto& k : traj.steps) {
    const auto h = gmon::assemble_h(k, kModel);
    auto [h1, h2] = qops::block_split(h - h_static, kModel.layout);
    acc.append(h1, h2);
  }
  REQUIRE(acc.frames().size() == frames.size());
  for (size_t j = 0; j < frames.size(); ++j) {
    CHECK((acc.frames()[j].h_eff_od - frames[j].h_eff_od).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((acc.frames()[j].h_eff_d - frames[j].h_eff_d).cwiseAbs().maxCoeff() < 1e-12);
  }
  const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout);
  CHECK(acc.integral_term() == doctest::Approx(ledger.integral_term).epsilon(1e-12));
  CHECK(acc.boundary_terms() ==
        doctest::Approx(ledger.boundary_start + ledger.boundary_end).epsilon(1e-12));
}

TEST_CASE("leakage bound ledger") {
  SUBCASE("all-zero controls") {
    control::ControlTrajectory traj;
    traj.dt_ns = 1.0;
    traj.steps.assign(10, gmon::ControlKnobs{});
    const auto frames = tswt::frames_along(traj, kModel);
    const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout);
    CHECK(ledger.l_tot == 0.0);
    CHECK(ledger.derivative_terms == 0.0);
  }

  SUBCASE("static drive: boundary terms only") {
    control::ControlTrajectory traj;
    traj.dt_ns = 1.0;
    gmon::ControlKnobs k;
    k.g_mhz = 15.0;
    k.f1_mhz = -8.0;
    traj.steps.assign(12, k);
    const auto frames = tswt::frames_along(traj, kModel);
    const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout);
    const double h = qops::spectral_norm(frames.front().h_eff_od);
    CHECK(ledger.integral_term < 1e-12);
    CHECK(ledger.l_tot == doctest::Approx(2.0 * h / kModel.layout.gap).epsilon(1e-12));
  }

  SUBCASE("needs at least three frames") {
    control::ControlTrajectory traj;
    traj.dt_ns = 1.0;
    traj.steps.assign(2, gmon::ControlKnobs{});
    const auto frames = tswt::frames_along(traj, kModel);
    CHECK_THROWS_AS(tswt::leakage_bound(frames, traj.dt_ns, kModel.layout),
                    std::invalid_argument);
  }

  SUBCASE("nonnegative entries and extension monotonicity") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      auto traj = band_limited_trajectory(50, 1.0, 10.0, 20.0, 600 + seed);
      const auto frames = tswt::frames_along(traj, kModel);
      const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout);
      CHECK(ledger.boundary_start >= 0.0);
      CHECK(ledger.boundary_end >= 0.0);
      CHECK(ledger.derivative_terms >= 0.0);
      CHECK(ledger.integral_term >= 0.0);
      CHECK(ledger.l_tot ==
            doctest::Approx(ledger.boundary_start + ledger.boundary_end + ledger.integral_term));

      auto extended = traj;
      extended.steps.insert(extended.steps.end(), 10, traj.steps.back());
      const auto frames2 = tswt::frames_along(extended, kModel);
      const auto ledger2 = tswt::leakage_bound(frames2, traj.dt_ns, kModel.layout);
      CHECK(ledger2.l_tot >= ledger.l_tot - 1e-9);
    }
  }

  SUBCASE("band-limited integral term magnitude") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const auto traj = leakage_ensemble_trajectory(100, 1.0, 10.0, 20.0, 900 + seed);
      const auto frames = tswt::frames_along(traj, kModel);
      const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout);
      CHECK(ledger.integral_term > 3e-5);
      CHECK(ledger.integral_term < 3e-3);
    }
  }

  SUBCASE("ledger json serialization") {
    tswt::LeakageLedger ledger;
    ledger.boundary_start = 0.5;
    ledger.l_tot = 1.5;
    const std::string text = ledger.to_json_string();
    CHECK(text.find("\"boundary_start\": 0.5") != std::string::npos);
    CHECK(text.find("\"l_tot\": 1.5") != std::string::npos);
  }
}

TEST_CASE("adiabatic bound") {
  const int n = 21;
  const std::vector<double> gaps(n, kModel.layout.gap);

  SUBCASE("zero off-diagonal part") {
    std::vector<qops::Matrix> hd(n, random_hermitian(9, 1.0, 5));
    std::vector<qops::Matrix> hod(n, qops::Matrix::Zero(9, 9));
    CHECK(tswt::adiabatic_bound(hd, hod, gaps, 0.1) == 0.0);
  }

  SUBCASE("constant commuting parts") {
    const auto m = random_hermitian(9, 1.0, 6);
    std::vector<qops::Matrix> hd(n, 2.0 * m);
    std::vector<qops::Matrix> hod(n, m);
    CHECK(tswt::adiabatic_bound(hd, hod, gaps, 0.1) < 1e-12);
  }

  SUBCASE("input validation") {
    std::vector<qops::Matrix> two(2, qops::Matrix::Zero(9, 9));
    std::vector<double> g2(2, 1.0);
    CHECK_THROWS_AS(tswt::adiabatic_bound(two, two, g2, 0.1), std::invalid_argument);
    std::vector<qops::Matrix> ok(n, qops::Matrix::Zero(9, 9));
    CHECK_THROWS_AS(tswt::adiabatic_bound(ok, ok, gaps, 0.0), std::invalid_argument);
  }
}

TEST_CASE("dominance and bound validity on the off-resonant ensemble (spot check)") {
  int valid = 0, total = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto traj = leakage_ensemble_trajectory(100, 1.0, 10.0, 20.0, 5000 + seed);
    const auto frames = tswt::frames_along(traj, kModel);
    const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, kModel.layout);
    CHECK(ledger.derivative_terms <= 0.1 * ledger.l_tot);

    const auto leak = dynamics::exact_leakage(traj, kModel, dynamics::Frame::dressed);
    ++total;
    if (leak.max_amplitude <= ledger.l_tot) ++valid;
  }
  CHECK(valid >= total - 1);
}

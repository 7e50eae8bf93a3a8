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

#include "ufoctl/tswt.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace ufoctl::tswt {

namespace {

constexpr int kSubspaces = 3;
const std::complex<double> kI{0.0, 1.0};

struct Blocks {
  std::array<std::vector<int>, kSubspaces> idx;
  std::array<double, kSubspaces> energy{};
};

std::vector<int> to_vec(const std::array<int, 4>& a) { return {a.begin(), a.end()}; }

/// Validate H0 (diagonal, subspace-constant) and read the subspace
/// energies off its diagonal.
Blocks analyze(const Matrix& h0, const SubspaceLayout& layout) {
  Blocks b;
  b.idx[0] = to_vec(layout.omega0);
  b.idx[1] = to_vec(layout.omega1);
  b.idx[2] = {layout.omega2.begin(), layout.omega2.end()};

  const double scale = std::max(1.0, h0.cwiseAbs().maxCoeff());
  for (int a = 0; a < kSubspaces; ++a) {
    b.energy[a] = h0(b.idx[a][0], b.idx[a][0]).real();
    for (int i : b.idx[a]) {
      if (std::abs(h0(i, i) - b.energy[a]) > 1e-9 * scale) {
        throw std::invalid_argument("H0 energies are not subspace-constant");
      }
    }
  }
  if ((h0 - Matrix(h0.diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("H0 must be diagonal");
  }
  const double gap_scale = layout.gap > 0.0 ? layout.gap : scale;
  for (int a = 0; a < kSubspaces; ++a) {
    for (int c = a + 1; c < kSubspaces; ++c) {
      if (std::abs(b.energy[a] - b.energy[c]) < 1e-6 * gap_scale) {
        throw std::domain_error("degenerate gap between distinct subspaces");
      }
    }
  }
  return b;
}

Matrix take(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
  return out;
}

void put(Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols,
         const Matrix& block) {
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) m(rows[r], cols[c]) = block(r, c);
}

using BlockMat = std::array<std::array<Matrix, kSubspaces>, kSubspaces>;

BlockMat split_blocks(const Matrix& m, const Blocks& b) {
  BlockMat out;
  for (int a = 0; a < kSubspaces; ++a)
    for (int c = 0; c < kSubspaces; ++c) out[a][c] = take(m, b.idx[a], b.idx[c]);
  return out;
}

/// First time derivative on the step grid: central in the interior,
/// one-sided at the ends, zero for a single sample.
Matrix first_derivative(const std::vector<Matrix>& h, int j, double dt_us) {
  const int n = int(h.size());
  if (n < 2) return Matrix::Zero(h[0].rows(), h[0].cols());
  if (j == 0) return (h[1] - h[0]) / dt_us;
  if (j == n - 1) return (h[n - 1] - h[n - 2]) / dt_us;
  return (h[j + 1] - h[j - 1]) / (2.0 * dt_us);
}

/// Second time derivative: central in the interior, neighbor-replicated
/// at the ends, zero below 3 samples.
Matrix second_derivative(const std::vector<Matrix>& h, int j, double dt_us) {
  const int n = int(h.size());
  if (n < 3) return Matrix::Zero(h[0].rows(), h[0].cols());
  const int jj = std::min(std::max(j, 1), n - 2);
  return (h[jj + 1] - 2.0 * h[jj] + h[jj - 1]) / (dt_us * dt_us);
}

TswtFrame build_frame(const Matrix& h0, const std::vector<Matrix>& h1s,
                      const std::vector<Matrix>& h2s, int j, double dt_us,
                      const SubspaceLayout& layout) {
  const Matrix dh1 = first_derivative(h1s, j, dt_us);
  const Matrix dh2 = first_derivative(h2s, j, dt_us);
  const Matrix d2h2 = second_derivative(h2s, j, dt_us);
  TswtFrame f;
  f.t_us = dt_us * double(j);
  f.s1 = s1_generator(h0, h2s[j], layout);
  f.s2 = s2_generator(h0, h1s[j], h2s[j], dh2, layout);
  auto [hd, hod] = effective_hamiltonians(h0, h1s[j], h2s[j], dh1, dh2, d2h2, layout);
  f.h_eff_d = std::move(hd);
  f.h_eff_od = std::move(hod);
  return f;
}

double frame_gap(const TswtFrame& f, const SubspaceLayout& layout, bool dynamic_gap) {
  if (!dynamic_gap) return layout.gap;
  double emax0 = -1e300, emin1 = 1e300;
  for (int i : layout.omega0) emax0 = std::max(emax0, f.h_eff_d(i, i).real());
  for (int i : layout.omega1) emin1 = std::min(emin1, f.h_eff_d(i, i).real());
  return emin1 - emax0;
}

}  // namespace

Matrix s1_generator(const Matrix& h0, const Matrix& h2, const SubspaceLayout& layout) {
  const Blocks b = analyze(h0, layout);
  const int d = layout.dim();
  Matrix s1 = Matrix::Zero(d, d);
  for (int a = 0; a < kSubspaces; ++a) {
    for (int c = 0; c < kSubspaces; ++c) {
      if (a == c) continue;
      const double denom = b.energy[c] - b.energy[a];
      put(s1, b.idx[a], b.idx[c], take(h2, b.idx[a], b.idx[c]) / denom);
    }
  }
  return s1;
}

Matrix s2_generator(const Matrix& h0, const Matrix& h1, const Matrix& h2,
                    const Matrix& dh2_dt, const SubspaceLayout& layout) {
  const Blocks b = analyze(h0, layout);
  const int d = layout.dim();
  Matrix s2 = Matrix::Zero(d, d);
  for (int a = 0; a < kSubspaces; ++a) {
    for (int c = 0; c < kSubspaces; ++c) {
      if (a == c) continue;
      const double denom = b.energy[c] - b.energy[a];
      const Matrix h1a = take(h1, b.idx[a], b.idx[a]);
      const Matrix h1c = take(h1, b.idx[c], b.idx[c]);
      const Matrix h2ac = take(h2, b.idx[a], b.idx[c]);
      const Matrix dh2ac = take(dh2_dt, b.idx[a], b.idx[c]);
      put(s2, b.idx[a], b.idx[c],
          (h1a * h2ac - h2ac * h1c - kI * dh2ac) / (denom * denom));
    }
  }
  return s2;
}

std::pair<Matrix, Matrix> effective_hamiltonians(const Matrix& h0, const Matrix& h1,
                                                 const Matrix& h2, const Matrix& dh1_dt,
                                                 const Matrix& dh2_dt, const Matrix& d2h2_dt2,
                                                 const SubspaceLayout& layout) {
  const Blocks b = analyze(h0, layout);
  const int d = layout.dim();

  const Matrix s1 = s1_generator(h0, h2, layout);
  const Matrix s2 = s2_generator(h0, h1, h2, dh2_dt, layout);

  // dS2/dt via the blockwise formula (the subspace energies are static).
  Matrix ds2 = Matrix::Zero(d, d);
  {
    const auto e = [&b](int a) { return b.energy[a]; };
    for (int a = 0; a < kSubspaces; ++a) {
      for (int c = 0; c < kSubspaces; ++c) {
        if (a == c) continue;
        const double de = e(c) - e(a);
        const Matrix h1a = take(h1, b.idx[a], b.idx[a]);
        const Matrix h1c = take(h1, b.idx[c], b.idx[c]);
        const Matrix dh1a = take(dh1_dt, b.idx[a], b.idx[a]);
        const Matrix dh1c = take(dh1_dt, b.idx[c], b.idx[c]);
        const Matrix h2ac = take(h2, b.idx[a], b.idx[c]);
        const Matrix dh2ac = take(dh2_dt, b.idx[a], b.idx[c]);
        const Matrix d2h2ac = take(d2h2_dt2, b.idx[a], b.idx[c]);
        put(ds2, b.idx[a], b.idx[c],
            (dh1a * h2ac + h1a * dh2ac - dh2ac * h1c - h2ac * dh1c - kI * d2h2ac) /
                (de * de));
      }
    }
  }

  // All surviving second- and third-order terms of the rotated-frame
  // expansion (the first- and second-order off-diagonal parts cancel by
  // the choice of S1 and S2). Built from full-matrix commutators so the
  // inter-subspace routes through a third subspace are kept; the final
  // block split separates the effective Hamiltonian from the residual.
  auto comm = [](const Matrix& x, const Matrix& y) { return (x * y - y * x).eval(); };
  const Matrix c_h2s1 = comm(h2, s1);
  Matrix total = h1 + 0.5 * c_h2s1 + comm(h1, s2) + 0.5 * comm(h2, s2) +
                 comm(c_h2s1, s1) / 3.0 - kI * ds2;
  auto [hd_part, hod] = block_split(total, layout);
  return {h0 + hd_part, hod};
}

std::vector<TswtFrame> frames_along(const control::ControlTrajectory& traj,
                                    const gmon::GmonModel& model,
                                    const std::vector<double>* eta_seq) {
  if (traj.steps.empty()) return {};
  if (eta_seq && eta_seq->size() != traj.steps.size()) {
    throw std::invalid_argument("eta sequence length must match trajectory");
  }
  const Matrix h_static = gmon::h0(model);
  const double dt_us = traj.dt_ns * 1e-3;
  std::vector<Matrix> h1s, h2s;
  h1s.reserve(traj.steps.size());
  h2s.reserve(traj.steps.size());
  for (size_t k = 0; k < traj.steps.size(); ++k) {
    gmon::GmonModel m = model;
    if (eta_seq) m.eta_mhz = (*eta_seq)[k];
    // Decompose against the unperturbed gap Hamiltonian: eta noise moves
    // the intra-subspace energies, not the reference block structure.
    const Matrix h = gmon::assemble_h(traj.steps[k], m);
    auto [h1, h2] = qops::block_split(h - h_static, model.layout);
    h1s.push_back(std::move(h1));
    h2s.push_back(std::move(h2));
  }
  std::vector<TswtFrame> frames;
  frames.reserve(h1s.size());
  for (int j = 0; j < int(h1s.size()); ++j) {
    frames.push_back(build_frame(h_static, h1s, h2s, j, dt_us, model.layout));
  }
  return frames;
}

std::string LeakageLedger::to_json_string() const {
  nlohmann::json j{{"boundary_start", boundary_start},
                   {"boundary_end", boundary_end},
                   {"derivative_terms", derivative_terms},
                   {"integral_term", integral_term},
                   {"l_tot", l_tot}};
  return j.dump(2);
}

LeakageLedger leakage_bound(const std::vector<TswtFrame>& frames, double dt_ns,
                            const SubspaceLayout& layout, bool dynamic_gap) {
  const int n = int(frames.size());
  if (n < 3) {
    throw std::invalid_argument("leakage bound needs at least 3 frames");
  }
  const double dt_us = dt_ns * 1e-3;
  std::vector<Matrix> hods;
  std::vector<double> gaps;
  hods.reserve(n);
  gaps.reserve(n);
  for (const auto& f : frames) {
    hods.push_back(f.h_eff_od);
    gaps.push_back(frame_gap(f, layout, dynamic_gap));
  }

  LeakageLedger ledger;
  ledger.boundary_start = qops::spectral_norm(hods.front()) / gaps.front();
  ledger.boundary_end = qops::spectral_norm(hods.back()) / gaps.back();
  const double dstart = qops::spectral_norm(first_derivative(hods, 0, dt_us));
  const double dend = qops::spectral_norm(first_derivative(hods, n - 1, dt_us));
  ledger.derivative_terms =
      2.0 * dstart / (gaps.front() * gaps.front()) + 2.0 * dend / (gaps.back() * gaps.back());
  double integral = 0.0;
  for (int j = 0; j < n; ++j) {
    integral +=
        qops::spectral_norm(second_derivative(hods, j, dt_us)) / (gaps[j] * gaps[j]) * dt_us;
  }
  ledger.integral_term = integral;
  ledger.l_tot = ledger.boundary_start + ledger.boundary_end + ledger.integral_term;
  return ledger;
}

double adiabatic_bound(const std::vector<Matrix>& hd_frames,
                       const std::vector<Matrix>& hod_frames,
                       const std::vector<double>& gap_frames, double t_us) {
  if (t_us <= 0.0) throw std::invalid_argument("total time must be positive");
  const int n = int(hod_frames.size());
  if (n < 3 || int(hd_frames.size()) != n || int(gap_frames.size()) != n) {
    throw std::invalid_argument("need >= 3 frames of equal count");
  }
  const double ds = 1.0 / double(n - 1);

  auto comm = [](const Matrix& a, const Matrix& c) { return a * c - c * a; };
  auto norm = [](const Matrix& m) { return qops::spectral_norm(m); };

  std::vector<Matrix> dhod(n), dhd(n), d2hod(n);
  for (int j = 0; j < n; ++j) {
    dhod[j] = first_derivative(hod_frames, j, ds);
    dhd[j] = first_derivative(hd_frames, j, ds);
    d2hod[j] = second_derivative(hod_frames, j, ds);
  }

  auto boundary = [&](int j) {
    const double g2 = gap_frames[j] * gap_frames[j];
    return (norm(dhod[j]) + t_us * norm(comm(hd_frames[j], hod_frames[j]))) / g2;
  };
  double bound = (boundary(0) + boundary(n - 1)) / t_us;

  for (int j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 * ds : ds;
    const double gap = gap_frames[j];
    const double g2 = gap * gap;
    const double first = norm(dhod[j]) + t_us * norm(comm(hd_frames[j], hod_frames[j]));
    bound += w * 5.0 / (g2 * gap) * first * first;
    bound += w / g2 *
             (t_us * norm(comm(hd_frames[j], comm(hd_frames[j], hod_frames[j]))) +
              2.0 * norm(comm(hd_frames[j], dhod[j])) + 2.0 * norm(comm(dhd[j], hod_frames[j])) +
              norm(d2hod[j]) / t_us);
  }
  return bound;
}

std::vector<Matrix> hd_time_varying(const std::vector<TswtFrame>& frames, const Matrix& h0) {
  std::vector<Matrix> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.h_eff_d - h0);
  return out;
}

std::vector<Matrix> hod_parts(const std::vector<TswtFrame>& frames) {
  std::vector<Matrix> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.h_eff_od);
  return out;
}

LedgerAccumulator::LedgerAccumulator(const Matrix& h0, double dt_ns,
                                     const SubspaceLayout& layout)
    : h0_(h0), dt_ns_(dt_ns), layout_(layout) {}

void LedgerAccumulator::append(Matrix h1, Matrix h2) {
  h1s_.push_back(std::move(h1));
  h2s_.push_back(std::move(h2));
  frames_.resize(h1s_.size());
  const int k = int(h1s_.size()) - 1;
  // Appending widens the derivative stencils of the trailing frames.
  for (int j = std::max(0, k - 2); j <= k; ++j) rebuild_frame(j);
}

void LedgerAccumulator::rebuild_frame(int j) {
  frames_[j] = build_frame(h0_, h1s_, h2s_, j, dt_ns_ * 1e-3, layout_);
}

double LedgerAccumulator::integral_term() const {
  const int n = int(frames_.size());
  if (n < 3) return 0.0;
  const double dt_us = dt_ns_ * 1e-3;
  std::vector<Matrix> hods = hod_parts(frames_);
  double integral = 0.0;
  const double g2 = layout_.gap * layout_.gap;
  for (int j = 0; j < n; ++j) {
    integral += qops::spectral_norm(second_derivative(hods, j, dt_us)) / g2 * dt_us;
  }
  return integral;
}

double LedgerAccumulator::boundary_terms() const {
  if (frames_.empty()) return 0.0;
  return (qops::spectral_norm(frames_.front().h_eff_od) +
          qops::spectral_norm(frames_.back().h_eff_od)) /
         layout_.gap;
}

}  // namespace ufoctl::tswt

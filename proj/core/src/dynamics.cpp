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

#include "ufoctl/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "ufoctl/tswt.hpp"

namespace ufoctl::dynamics {

namespace {
const std::complex<double> kI{0.0, 1.0};

Matrix exp_antihermitian(const Matrix& s) {
  // S anti-Hermitian => iS Hermitian and exp(S) = exp(-i (iS)).
  return expm_hermitian(kI * s, 1.0);
}
}  // namespace

Matrix expm_hermitian(const Matrix& h, double t_us) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  const auto& v = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(-kI * es.eigenvalues()(i) * t_us);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

PropagationResult propagate_with_eta(const control::ControlTrajectory& traj,
                                     const gmon::GmonModel& model,
                                     const std::vector<double>* eta_mhz, Space space,
                                     bool keep_steps) {
  if (!traj.finite()) {
    throw std::invalid_argument("trajectory has non-finite entries");
  }
  if (eta_mhz && eta_mhz->size() != traj.steps.size()) {
    throw std::invalid_argument("eta sequence length must match trajectory");
  }
  const double dt_us = traj.dt_ns * 1e-3;
  const int dim = space == Space::full ? model.layout.dim() : 4;
  PropagationResult result;
  result.unitary = Matrix::Identity(dim, dim);
  if (keep_steps) result.per_step.reserve(traj.steps.size());

  for (size_t k = 0; k < traj.steps.size(); ++k) {
    Matrix h;
    if (space == Space::full) {
      gmon::GmonModel m = model;
      if (eta_mhz) m.eta_mhz = (*eta_mhz)[k];
      h = gmon::assemble_h(traj.steps[k], m);
    } else {
      h = gmon::project_to_qubits(traj.steps[k], model);
    }
    if (!h.allFinite()) {
      throw std::invalid_argument("non-finite Hamiltonian entries");
    }
    Matrix step = expm_hermitian(h, dt_us);
    result.unitary = step * result.unitary;
    if (keep_steps) result.per_step.push_back(std::move(step));
  }
  return result;
}

PropagationResult propagate(const control::ControlTrajectory& traj,
                            const gmon::GmonModel& model,
                            const control::NoiseModel* noise, Space space,
                            bool keep_steps) {
  if (!noise) return propagate_with_eta(traj, model, nullptr, space, keep_steps);
  const auto perturbed = control::perturb(traj, model, *noise);
  return propagate_with_eta(perturbed.traj, model, &perturbed.eta_mhz, space, keep_steps);
}

double gate_fidelity(const Matrix& u, const Matrix& target) {
  if (u.rows() != 4 || u.cols() != 4 || target.rows() != 4 || target.cols() != 4) {
    throw std::invalid_argument("gate fidelity takes 4x4 operators");
  }
  const std::complex<double> tr = (u.adjoint() * target).trace();
  return std::norm(tr) / 16.0;
}

LeakageReport leakage_of_unitary(const Matrix& u9, const qops::SubspaceLayout& layout) {
  LeakageReport rep;
  double amp_sum = 0.0, pop_sum = 0.0;
  for (int m : layout.omega0) {
    double amp = 0.0, pop = 0.0;
    for (int l = 0; l < layout.dim(); ++l) {
      if (layout.subspace_of(l) == 0) continue;
      const double a = std::abs(u9(l, m));
      amp += a;
      pop += a * a;
    }
    rep.max_amplitude = std::max(rep.max_amplitude, amp);
    rep.max_population = std::max(rep.max_population, pop);
    amp_sum += amp;
    pop_sum += pop;
  }
  rep.mean_amplitude = amp_sum / 4.0;
  rep.mean_population = pop_sum / 4.0;
  return rep;
}

LeakageReport exact_leakage(const control::ControlTrajectory& traj,
                            const gmon::GmonModel& model, Frame frame) {
  if (traj.steps.empty()) return {};
  Matrix u = propagate(traj, model, nullptr, Space::full).unitary;
  if (frame == Frame::dressed) {
    const auto frames = tswt::frames_along(traj, model);
    const Matrix s_start = frames.front().s1 + frames.front().s2;
    const Matrix s_end = frames.back().s1 + frames.back().s2;
    u = exp_antihermitian(-s_end) * u * exp_antihermitian(s_start);
  }
  return leakage_of_unitary(u, model.layout);
}

double qubit_block_unitarity_defect(const Matrix& u9) {
  const qops::SubspaceLayout layout = qops::SubspaceLayout::make(1.0);
  const Eigen::Matrix4cd block = omega0_block(u9, layout);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(block);
  return 1.0 - svd.singularValues().minCoeff();
}

Eigen::Matrix4cd omega0_block(const Matrix& u9, const qops::SubspaceLayout& layout) {
  Eigen::Matrix4cd block;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) block(r, c) = u9(layout.omega0[r], layout.omega0[c]);
  return block;
}

}  // namespace ufoctl::dynamics

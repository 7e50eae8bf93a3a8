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

#include "ufoctl/targets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ufoctl::targets {

namespace {

const std::complex<double> kI{0.0, 1.0};

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::Matrix4cd exp_i(const Eigen::Matrix4cd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(hermitian);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) phases(i) = std::exp(kI * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

GateTarget n_gate(double alpha, double gamma) {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  sz << 1, 0, 0, -1;
  const Eigen::Matrix4cd m = alpha * kron2(sx, sx) + alpha * kron2(sy, sy) + gamma * kron2(sz, sz);
  GateTarget t;
  t.alpha = alpha;
  t.gamma = gamma;
  t.matrix = exp_i(m);
  std::ostringstream os;
  os << "N:" << alpha << ":" << gamma;
  t.label = os.str();
  return t;
}

GateTarget canonical_gate(const std::string& name) {
  GateTarget t;
  t.label = name;
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  if (name == "IDENTITY") {
  } else if (name == "CZ") {
    m(3, 3) = -1.0;
  } else if (name == "CNOT") {
    m.setZero();
    m(0, 0) = m(1, 1) = 1.0;
    m(2, 3) = m(3, 2) = 1.0;
  } else if (name == "ISWAP") {
    m.setZero();
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = kI;
  } else if (name == "SWAP") {
    m.setZero();
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = 1.0;
  } else if (name == "FSWAP") {
    m.setZero();
    m(0, 0) = 1.0;
    m(1, 2) = m(2, 1) = 1.0;
    m(3, 3) = -1.0;
  } else {
    throw std::invalid_argument("unknown gate name: " + name);
  }
  t.matrix = m;
  return t;
}

GateTarget parse_target(const std::string& spec) {
  if (spec.rfind("N:", 0) != 0) return canonical_gate(spec);
  std::istringstream is(spec.substr(2));
  std::string a, g;
  if (!std::getline(is, a, ':') || !std::getline(is, g, ':')) {
    throw std::invalid_argument("target spec must be a gate name or N:<alpha>:<gamma>");
  }
  try {
    return n_gate(std::stod(a), std::stod(g));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad numeric fields in target spec: " + spec);
  }
}

SynthesisReference synthesis_runtime() { return SynthesisReference{}; }

control::ControlTrajectory xy_gate_program(double alpha, double g_max_mhz,
                                           double delta_max_mhz, double dt_hint_ns) {
  if (g_max_mhz <= 0.0 || delta_max_mhz <= 0.0 || dt_hint_ns <= 0.0) {
    throw std::invalid_argument("pulse program needs positive amplitude caps and dt");
  }
  // The family is pi-periodic in alpha.
  alpha = std::fmod(alpha, M_PI);
  if (alpha < 0.0) alpha += M_PI;

  control::ControlTrajectory traj;
  const double t_g_us = alpha / (M_PI * g_max_mhz);

  if (t_g_us > 0.0) {
    const int n_g = std::max(1, int(std::ceil(t_g_us * 1000.0 / dt_hint_ns)));
    const double dt_us = t_g_us / n_g;
    traj.dt_ns = dt_us * 1000.0;
    // A detuning of 0.5 / T on both qubits accumulates the required pi/2
    // Z phase during the same window.
    const double delta_conc = 0.5 / t_g_us;
    gmon::ControlKnobs k;
    k.g_mhz = -g_max_mhz;
    if (delta_conc <= delta_max_mhz) {
      k.delta1_mhz = k.delta2_mhz = delta_conc;
      traj.steps.assign(n_g, k);
      return traj;
    }
    traj.steps.assign(n_g, k);
    // Z phase does not fit concurrently: append a detuning-only segment
    // commensurate with dt.
    const int n_z = int(std::ceil(0.5 / (delta_max_mhz * dt_us)));
    gmon::ControlKnobs z;
    z.delta1_mhz = z.delta2_mhz = 0.5 / (n_z * dt_us);
    traj.steps.insert(traj.steps.end(), n_z, z);
    return traj;
  }

  const double t_z_us = 0.5 / delta_max_mhz;
  const int n_z = std::max(1, int(std::ceil(t_z_us * 1000.0 / dt_hint_ns)));
  traj.dt_ns = t_z_us / n_z * 1000.0;
  gmon::ControlKnobs z;
  z.delta1_mhz = z.delta2_mhz = delta_max_mhz;
  traj.steps.assign(n_z, z);
  return traj;
}

}  // namespace ufoctl::targets

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

#include "ufoctl/gmon.hpp"

#include <cmath>
#include <stdexcept>

namespace ufoctl::gmon {

namespace {
const qops::Complex kI{0.0, 1.0};
}  // namespace

bool ControlKnobs::finite() const {
  for (double v : as_array()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool within_range(const ControlKnobs& k, double max_mhz) {
  return std::abs(k.g_mhz) <= max_mhz && std::abs(k.delta1_mhz) <= max_mhz &&
         std::abs(k.delta2_mhz) <= max_mhz && std::abs(k.f1_mhz) <= max_mhz &&
         std::abs(k.f2_mhz) <= max_mhz;
}

Matrix h0(const GmonModel& model) {
  const auto& layout = model.layout;
  const Matrix n1 = qops::number_op(1, layout);
  const Matrix n2 = qops::number_op(2, layout);
  const Matrix id = Matrix::Identity(layout.dim(), layout.dim());
  return 0.5 * angular(model.eta_mhz) *
         (n1 * (n1 - id) + n2 * (n2 - id));
}

Matrix assemble_h(const ControlKnobs& knobs, const GmonModel& model) {
  if (!knobs.finite()) {
    throw std::invalid_argument("control knobs must be finite");
  }
  const auto& layout = model.layout;
  const Matrix a1 = qops::annihilation(1, layout);
  const Matrix a2 = qops::annihilation(2, layout);

  Matrix h = h0(model);
  h += angular(knobs.g_mhz) * (a2.adjoint() * a1 + a1.adjoint() * a2);
  h += angular(knobs.delta1_mhz) * (a1.adjoint() * a1);
  h += angular(knobs.delta2_mhz) * (a2.adjoint() * a2);
  h += angular(knobs.f1_mhz) * kI *
       (a1 * std::exp(-kI * knobs.phi1_rad) - a1.adjoint() * std::exp(kI * knobs.phi1_rad));
  h += angular(knobs.f2_mhz) * kI *
       (a2 * std::exp(-kI * knobs.phi2_rad) - a2.adjoint() * std::exp(kI * knobs.phi2_rad));
  return h;
}

std::array<Matrix, 3> decompose(const Matrix& h, const GmonModel& model) {
  const Matrix h_static = h0(model);
  auto [h1, h2] = qops::block_split(h - h_static, model.layout);
  return {h_static, h1, h2};
}

Eigen::Matrix4cd project_to_qubits(const ControlKnobs& knobs, const GmonModel&) {
  if (!knobs.finite()) {
    throw std::invalid_argument("control knobs must be finite");
  }
  Eigen::Matrix2cd sx, sy, sz, id;
  sx << 0, 1, 1, 0;
  sy << 0, qops::Complex(0, -1), qops::Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  id.setIdentity();

  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };

  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h += 0.5 * angular(knobs.g_mhz) * (kron(sx, sx) + kron(sy, sy));
  h += 0.5 * angular(knobs.delta1_mhz) * kron(sz, id);
  h += 0.5 * angular(knobs.delta2_mhz) * kron(id, sz);
  h += angular(knobs.f1_mhz) *
       (std::sin(knobs.phi1_rad) * kron(sx, id) - std::cos(knobs.phi1_rad) * kron(sy, id));
  h += angular(knobs.f2_mhz) *
       (std::sin(knobs.phi2_rad) * kron(id, sx) - std::cos(knobs.phi2_rad) * kron(id, sy));
  return h;
}

}  // namespace ufoctl::gmon

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

#ifndef UFOCTL_TARGETS_HPP_
#define UFOCTL_TARGETS_HPP_

#include <string>

#include "ufoctl/control.hpp"
#include "ufoctl/qops.hpp"

namespace ufoctl::targets {

struct GateTarget {
  double alpha = 0.0;
  double gamma = 0.0;
  Eigen::Matrix4cd matrix;
  std::string label;
};

/// exp[i(alpha XX + alpha YY + gamma ZZ)] in the |00>,|01>,|10>,|11> basis
/// (the three Pauli products commute, so the exponential is exact).
GateTarget n_gate(double alpha, double gamma);

/// CZ, CNOT, ISWAP, SWAP, FSWAP or IDENTITY. Throws on an unknown name.
GateTarget canonical_gate(const std::string& name);

/// Target addressable by CLI string: a canonical name or "N:<alpha>:<gamma>".
GateTarget parse_target(const std::string& spec);

/// Circuit-synthesis runtime reference for the two-qubit gate family:
/// depth-7 circuit of 5 single-qubit gates (20 ns) and 3 two-qubit gates
/// (45 ns), quoted at 215 ns total (the naive per-gate sum is 235 ns;
/// both numbers are kept).
struct SynthesisReference {
  double single_qubit_ns = 20.0;
  double two_qubit_ns = 45.0;
  double total_ns = 215.0;
  int depth = 7;
  int n_single_qubit = 5;
  int n_two_qubit = 3;
  double naive_sum_ns() const {
    return n_single_qubit * single_qubit_ns + n_two_qubit * two_qubit_ns;
  }
};
SynthesisReference synthesis_runtime();

/// Constant-knob pulse program realizing N(alpha, alpha, pi/2) up to a
/// global phase: a g-pulse of duration alpha / (pi g_max) us with the two
/// detunings run concurrently when the required Z phase fits the range,
/// and as a trailing detuning-only segment otherwise. Step count chosen
/// so each segment is exactly represented (dt adjusts, <= dt_hint).
control::ControlTrajectory xy_gate_program(double alpha, double g_max_mhz,
                                           double delta_max_mhz, double dt_hint_ns);

}  // namespace ufoctl::targets

#endif  // UFOCTL_TARGETS_HPP_

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

#include "ufoctl/evaluate.hpp"

#include <cmath>
#include <stdexcept>

#include "ufoctl/rng.hpp"

namespace ufoctl::evaluate {

Eigen::Matrix4cd NoisyChannel::apply(const Eigen::Matrix4cd& x) const {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (const auto& u : samples) out += u * x * u.adjoint();
  return out / double(samples.size());
}

NoisyChannel noisy_channel(const control::ControlTrajectory& traj, const gmon::GmonModel& model,
                           const control::NoiseModel& noise, int n_samples,
                           dynamics::Space space) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  NoisyChannel channel;
  channel.samples.reserve(n_samples);
  double defect = 0.0;
  for (int m = 0; m < n_samples; ++m) {
    control::NoiseModel draw = noise;
    draw.seed = rng::derive(noise.seed, 0x6368616e /* "chan" */, m);
    const auto result = dynamics::propagate(traj, model, &draw, space);
    Eigen::Matrix4cd block;
    if (space == dynamics::Space::full) {
      block = dynamics::omega0_block(result.unitary, model.layout);
    } else {
      block = result.unitary;
    }
    defect += 1.0 - (block.adjoint() * block).trace().real() / 4.0;
    channel.samples.push_back(block);
  }
  channel.mean_trace_defect = defect / double(n_samples);
  return channel;
}

const std::vector<Eigen::Matrix4cd>& pauli_basis() {
  static const std::vector<Eigen::Matrix4cd> basis = [] {
    std::vector<Eigen::Matrix2cd> p(4);
    p[0].setIdentity();
    p[1] << 0, 1, 1, 0;
    p[2] << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    p[3] << 1, 0, 0, -1;
    std::vector<Eigen::Matrix4cd> out;
    out.reserve(16);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Eigen::Matrix4cd m;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = p[a](i, j) * p[b];
        out.push_back(m);
      }
    }
    return out;
  }();
  return basis;
}

double average_fidelity_nielsen(const ChannelFn& channel, const Eigen::Matrix4cd& target) {
  const double d = 4.0;
  std::complex<double> sum = 0.0;
  for (const auto& u : pauli_basis()) {
    sum += (target * u.adjoint() * target.adjoint() * channel(u)).trace();
  }
  return (sum.real() + d * d) / (d * d * (d + 1.0));
}

double average_fidelity_nielsen(const NoisyChannel& channel, const Eigen::Matrix4cd& target) {
  return average_fidelity_nielsen(
      [&channel](const Eigen::Matrix4cd& x) { return channel.apply(x); }, target);
}

double average_fidelity_haar_mc(const NoisyChannel& channel, const Eigen::Matrix4cd& target,
                                int n_states, uint64_t seed) {
  if (n_states < 1) throw std::invalid_argument("need at least one state");
  rng::Stream stream(rng::derive(seed, 0x68616172 /* "haar" */));
  double sum = 0.0;
  for (int s = 0; s < n_states; ++s) {
    Eigen::Vector4cd psi;
    for (int i = 0; i < 4; ++i) {
      psi(i) = std::complex<double>(stream.gaussian(), stream.gaussian());
    }
    psi.normalize();
    const Eigen::Vector4cd tpsi = target * psi;
    double f = 0.0;
    for (const auto& u : channel.samples) {
      f += std::norm(tpsi.dot(u * psi));  // dot() conjugates the left side
    }
    sum += f / double(channel.samples.size());
  }
  return sum / double(n_states);
}

EvaluationReport fidelity_variance(const control::ControlTrajectory& traj,
                                   const gmon::GmonModel& model,
                                   const Eigen::Matrix4cd& target, double sigma_mhz, int n,
                                   uint64_t seed, dynamics::Space space) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  control::NoiseModel noise;
  noise.sigma_mhz = sigma_mhz;
  noise.seed = seed;
  const NoisyChannel channel = noisy_channel(traj, model, noise, n, space);

  EvaluationReport report;
  report.per_sample_fidelities.reserve(n);
  double mean = 0.0;
  for (const auto& block : channel.samples) {
    const double f = dynamics::gate_fidelity(block, target);
    report.per_sample_fidelities.push_back(f);
    mean += f;
  }
  mean /= double(n);
  double var = 0.0;
  for (double f : report.per_sample_fidelities) var += (f - mean) * (f - mean);
  report.f_ave_haar = mean;
  report.sigma_fidelity = var / double(n);
  report.f_ave_nielsen = average_fidelity_nielsen(channel, target);
  return report;
}

bool robustness_check(const EvaluationReport& report, double f_ideal,
                      const RobustnessSpec& spec) {
  return std::abs(report.f_ave_haar - f_ideal) < spec.epsilon0;
}

}  // namespace ufoctl::evaluate

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

#include "ufoctl/control.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ufoctl/rng.hpp"

namespace ufoctl::control {

bool ControlTrajectory::finite() const {
  for (const auto& k : steps) {
    if (!k.finite()) return false;
  }
  return std::isfinite(dt_ns) && dt_ns > 0.0;
}

FilterConfig FilterConfig::from_bandwidth(double bandwidth_mhz, double sample_rate_mhz) {
  if (!(bandwidth_mhz >= 0.0) || !(sample_rate_mhz > 0.0)) {
    throw std::invalid_argument("filter bandwidth/sample rate must be nonnegative/positive");
  }
  FilterConfig cfg;
  cfg.bandwidth_mhz = bandwidth_mhz;
  cfg.sample_rate_mhz = sample_rate_mhz;
  cfg.alpha = std::exp(-M_PI * bandwidth_mhz / sample_rate_mhz);
  cfg.a1 = (1.0 - cfg.alpha) * (1.0 - cfg.alpha);
  cfg.b1 = -2.0 * cfg.alpha;
  cfg.b2 = cfg.alpha * cfg.alpha;
  return cfg;
}

ControlKnobs filter_step(const ControlKnobs& proposed, const ControlKnobs& prev,
                         const ControlKnobs& prev2, const FilterConfig& cfg) {
  auto smooth = [&cfg](double p, double c1, double c2) {
    return cfg.a1 * p - cfg.b1 * c1 - cfg.b2 * c2;
  };
  ControlKnobs out;
  out.g_mhz = smooth(proposed.g_mhz, prev.g_mhz, prev2.g_mhz);
  out.delta1_mhz = smooth(proposed.delta1_mhz, prev.delta1_mhz, prev2.delta1_mhz);
  out.delta2_mhz = smooth(proposed.delta2_mhz, prev.delta2_mhz, prev2.delta2_mhz);
  out.f1_mhz = smooth(proposed.f1_mhz, prev.f1_mhz, prev2.f1_mhz);
  out.f2_mhz = smooth(proposed.f2_mhz, prev.f2_mhz, prev2.f2_mhz);
  out.phi1_rad = proposed.phi1_rad;
  out.phi2_rad = proposed.phi2_rad;
  return out;
}

double filter_gain(double freq_mhz, const FilterConfig& cfg) {
  if (freq_mhz < 0.0 || freq_mhz > 0.5 * cfg.sample_rate_mhz) {
    throw std::domain_error("frequency outside [0, sample_rate/2]");
  }
  const double w = qops::kTwoPi * freq_mhz / cfg.sample_rate_mhz;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = std::polar(1.0, -2.0 * w);
  return std::abs(cfg.a1 / (1.0 + cfg.b1 * z1 + cfg.b2 * z2));
}

PerturbedTrajectory perturb(const ControlTrajectory& traj, const GmonModel& model,
                            const NoiseModel& noise) {
  if (noise.sigma_mhz < 0.0) {
    throw std::invalid_argument("noise sigma must be nonnegative");
  }
  PerturbedTrajectory out;
  out.traj.dt_ns = traj.dt_ns;
  out.traj.steps.reserve(traj.steps.size());
  out.eta_mhz.reserve(traj.steps.size());

  rng::Stream stream(rng::derive(noise.seed, /*purpose=*/0x6e6f6973 /* "nois" */));
  const double s = noise.sigma_mhz;
  double eta_episode = model.eta_mhz;
  if (noise.eta_per_episode) eta_episode += s * stream.gaussian();

  for (const auto& k : traj.steps) {
    double eta = eta_episode;
    if (!noise.eta_per_episode) eta = model.eta_mhz + s * stream.gaussian();
    ControlKnobs p = k;
    p.g_mhz += s * stream.gaussian();
    p.delta1_mhz += s * stream.gaussian();
    p.delta2_mhz += s * stream.gaussian();
    p.f1_mhz += s * stream.gaussian();
    p.f2_mhz += s * stream.gaussian();
    out.traj.steps.push_back(p);
    out.eta_mhz.push_back(eta);
  }
  return out;
}

BoundaryValues boundary_values(const ControlTrajectory& traj) {
  if (traj.steps.empty()) {
    throw std::invalid_argument("trajectory must be nonempty");
  }
  const ControlKnobs& first = traj.steps.front();
  const ControlKnobs& last = traj.steps.back();
  BoundaryValues b;
  b.g0_sq = first.g_mhz * first.g_mhz;
  b.gT_sq = last.g_mhz * last.g_mhz;
  b.f0_sq_sum = first.f1_mhz * first.f1_mhz + first.f2_mhz * first.f2_mhz;
  b.fT_sq_sum = last.f1_mhz * last.f1_mhz + last.f2_mhz * last.f2_mhz;
  return b;
}

std::string to_json_string(const ControlTrajectory& traj) {
  nlohmann::json j;
  j["version"] = 1;
  j["dt_ns"] = traj.dt_ns;
  auto& steps = j["steps"] = nlohmann::json::array();
  for (const auto& k : traj.steps) {
    steps.push_back({{"g", k.g_mhz},
                     {"d1", k.delta1_mhz},
                     {"d2", k.delta2_mhz},
                     {"f1", k.f1_mhz},
                     {"f2", k.f2_mhz},
                     {"p1", k.phi1_rad},
                     {"p2", k.phi2_rad}});
  }
  return j.dump(2);
}

ControlTrajectory trajectory_from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("version", 0) != 1) {
    throw std::runtime_error("unsupported trajectory format version");
  }
  ControlTrajectory traj;
  traj.dt_ns = j.at("dt_ns").get<double>();
  for (const auto& s : j.at("steps")) {
    ControlKnobs k;
    k.g_mhz = s.at("g").get<double>();
    k.delta1_mhz = s.at("d1").get<double>();
    k.delta2_mhz = s.at("d2").get<double>();
    k.f1_mhz = s.at("f1").get<double>();
    k.f2_mhz = s.at("f2").get<double>();
    k.phi1_rad = s.at("p1").get<double>();
    k.phi2_rad = s.at("p2").get<double>();
    traj.steps.push_back(k);
  }
  return traj;
}

void save_trajectory(const ControlTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json_string(traj) << '\n';
}

ControlTrajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return trajectory_from_json_string(text);
}

}  // namespace ufoctl::control

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

#include "ufoctl/baseline.hpp"

#include <cmath>
#include <stdexcept>

#include "ufoctl/rng.hpp"

namespace ufoctl::baseline {

Eigen::VectorXd flatten(const control::ControlTrajectory& traj) {
  Eigen::VectorXd out(7 * traj.steps.size());
  int at = 0;
  for (const auto& k : traj.steps) {
    for (double v : k.as_array()) out(at++) = v;
  }
  return out;
}

control::ControlTrajectory unflatten(const Eigen::VectorXd& params, double dt_ns) {
  if (params.size() % 7 != 0) {
    throw std::invalid_argument("parameter vector length must be a multiple of 7");
  }
  control::ControlTrajectory traj;
  traj.dt_ns = dt_ns;
  traj.steps.resize(params.size() / 7);
  for (size_t s = 0; s < traj.steps.size(); ++s) {
    std::array<double, 7> v;
    for (int i = 0; i < 7; ++i) v[i] = params(7 * s + i);
    traj.steps[s] = gmon::ControlKnobs::from_array(v);
  }
  return traj;
}

double evaluate_cost(const Eigen::VectorXd& params, const Problem& prob, const SgdConfig& cfg) {
  if (!params.allFinite()) {
    throw std::invalid_argument("parameters must be finite");
  }
  const control::ControlTrajectory traj = unflatten(params, prob.dt_ns);
  if (cfg.noise_average <= 0) {
    return objective::ufo_cost(traj, prob.model, prob.target, prob.weights, prob.space).total;
  }
  double sum = 0.0;
  for (int m = 0; m < cfg.noise_average; ++m) {
    control::NoiseModel noise;
    noise.sigma_mhz = cfg.noise_sigma_mhz;
    noise.seed = rng::derive(cfg.seed, 0x637374 /* "cst" */, m);
    const auto perturbed = control::perturb(traj, prob.model, noise);
    sum += objective::ufo_cost(perturbed.traj, prob.model, prob.target, prob.weights,
                               prob.space, &perturbed.eta_mhz)
               .total;
  }
  return sum / double(cfg.noise_average);
}

Eigen::VectorXd cost_gradient(const Eigen::VectorXd& params, const Problem& prob,
                              const SgdConfig& cfg) {
  const double h = cfg.fd_step_mhz;
  Eigen::VectorXd grad(params.size());
  Eigen::VectorXd p = params;
  for (int i = 0; i < params.size(); ++i) {
    const double saved = p(i);
    p(i) = saved + h;
    const double up = evaluate_cost(p, prob, cfg);
    p(i) = saved - h;
    const double down = evaluate_cost(p, prob, cfg);
    p(i) = saved;
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

OptimizeResult adam_optimize(const Problem& prob, const SgdConfig& cfg) {
  rng::Stream stream(rng::derive(cfg.seed, 0x736764 /* "sgd" */));
  Eigen::VectorXd init(7 * prob.n_steps);
  for (int i = 0; i < init.size(); ++i) init(i) = cfg.init_scale_mhz * stream.gaussian();
  return adam_optimize_from(init, prob, cfg);
}

OptimizeResult adam_optimize_from(const Eigen::VectorXd& init, const Problem& prob,
                                  const SgdConfig& cfg) {
  if (cfg.iterations <= 0) throw std::invalid_argument("iterations must be positive");
  Eigen::VectorXd params = init;
  mlp::Adam adam(int(params.size()), cfg.adam);

  OptimizeResult res;
  res.best_params = params;
  res.best_cost = evaluate_cost(params, prob, cfg);
  res.cost_history.push_back(res.best_cost);

  for (int it = 0; it < cfg.iterations; ++it) {
    const Eigen::VectorXd grad = cost_gradient(params, prob, cfg);
    adam.step(params, grad);
    const double cost = evaluate_cost(params, prob, cfg);
    res.cost_history.push_back(cost);
    if (cost > cfg.divergence_abort || !std::isfinite(cost)) {
      throw std::runtime_error("baseline optimization diverged (cost " + std::to_string(cost) +
                               " at iteration " + std::to_string(it) + ")");
    }
    if (cost < res.best_cost) {
      res.best_cost = cost;
      res.best_params = params;
    }
  }
  const control::ControlTrajectory best = unflatten(res.best_params, prob.dt_ns);
  res.best_breakdown =
      objective::ufo_cost(best, prob.model, prob.target, prob.weights, prob.space);
  return res;
}

}  // namespace ufoctl::baseline

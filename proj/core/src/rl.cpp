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

#include "ufoctl/rl.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace ufoctl::rl {

namespace {
constexpr uint64_t kPurposeEnvNoise = 0x656e76;   // "env"
constexpr uint64_t kPurposeActions = 0x616374;    // "act"
constexpr double kLog2Pi = 1.8378770664093454836;
}  // namespace

ControlEnv::ControlEnv(EnvConfig cfg)
    : cfg_(std::move(cfg)),
      filter_(control::FilterConfig::for_dt(cfg_.filter_bandwidth_mhz, cfg_.dt_ns)),
      h0_(gmon::h0(cfg_.model)),
      tracker_(cfg_.weights, cfg_.per_step_reward) {
  if (cfg_.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (cfg_.full_state_features && cfg_.space != dynamics::Space::full) {
    throw std::invalid_argument("full-state features need the full space");
  }
}

EnvState ControlEnv::reset(uint64_t episode_seed) {
  const int dim = cfg_.space == dynamics::Space::full ? cfg_.model.layout.dim() : 4;
  u_ = qops::Matrix::Identity(dim, dim);
  realized_.dt_ns = cfg_.dt_ns;
  realized_.steps.clear();
  eta_.clear();
  prev_ = prev2_ = control::ControlKnobs{};
  noise_ = std::make_unique<rng::Stream>(rng::derive(episode_seed, kPurposeEnvNoise));
  eta_episode_ = cfg_.model.eta_mhz;
  if (cfg_.eta_per_episode) {
    eta_episode_ += cfg_.noise_sigma_mhz * noise_->gaussian();
  }
  if (cfg_.space == dynamics::Space::full) {
    ledger_.emplace(h0_, cfg_.dt_ns, cfg_.model.layout);
  } else {
    ledger_.reset();
  }
  tracker_ = objective::RewardTracker(cfg_.weights, cfg_.per_step_reward);
  final_cost_ = {};
  step_index_ = 0;
  done_ = false;
  return observe();
}

EnvState ControlEnv::observe() const {
  EnvState s;
  s.step_index = step_index_;
  const int n = cfg_.full_state_features ? 9 : 4;
  s.features.resize(2 * n * n + 1);
  Eigen::MatrixXcd block;
  if (cfg_.full_state_features) {
    block = u_;
  } else if (cfg_.space == dynamics::Space::full) {
    block = dynamics::omega0_block(u_, cfg_.model.layout);
  } else {
    block = u_;
  }
  int at = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) s.features(at++) = block(r, c).real();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) s.features(at++) = block(r, c).imag();
  s.features(at) = double(step_index_) / double(cfg_.n_max);
  return s;
}

ControlEnv::StepResult ControlEnv::step(const Eigen::VectorXd& action) {
  if (done_) throw std::logic_error("step() after episode end; call reset()");
  if (action.size() != kActionDim || !action.allFinite()) {
    throw std::invalid_argument("action must be a finite 7-vector");
  }
  auto clamp = [](double v) { return std::min(1.0, std::max(-1.0, v)); };
  const double amp = cfg_.amplitude_scale_mhz;
  control::ControlKnobs proposed;
  proposed.g_mhz = amp * clamp(action(0));
  proposed.delta1_mhz = amp * clamp(action(1));
  proposed.delta2_mhz = amp * clamp(action(2));
  proposed.f1_mhz = amp * clamp(action(3));
  proposed.f2_mhz = amp * clamp(action(4));
  proposed.phi1_rad = M_PI * (clamp(action(5)) + 1.0);
  proposed.phi2_rad = M_PI * (clamp(action(6)) + 1.0);

  const control::ControlKnobs filtered = control::filter_step(proposed, prev_, prev2_, filter_);
  prev2_ = prev_;
  prev_ = filtered;

  // Actuation noise; draw order matches the trajectory perturbation
  // (eta, g, delta1, delta2, f1, f2).
  const double s = cfg_.noise_sigma_mhz;
  double eta_k = eta_episode_;
  if (!cfg_.eta_per_episode) eta_k = cfg_.model.eta_mhz + s * noise_->gaussian();
  control::ControlKnobs applied = filtered;
  applied.g_mhz += s * noise_->gaussian();
  applied.delta1_mhz += s * noise_->gaussian();
  applied.delta2_mhz += s * noise_->gaussian();
  applied.f1_mhz += s * noise_->gaussian();
  applied.f2_mhz += s * noise_->gaussian();

  realized_.steps.push_back(applied);
  eta_.push_back(eta_k);

  const double dt_us = cfg_.dt_ns * 1e-3;
  qops::Matrix h;
  if (cfg_.space == dynamics::Space::full) {
    gmon::GmonModel m = cfg_.model;
    m.eta_mhz = eta_k;
    h = gmon::assemble_h(applied, m);
    auto [h1, h2] = qops::block_split(h - h0_, cfg_.model.layout);
    ledger_->append(std::move(h1), std::move(h2));
  } else {
    h = gmon::project_to_qubits(applied, cfg_.model);
  }
  u_ = dynamics::expm_hermitian(h, dt_us) * u_;
  ++step_index_;

  Eigen::Matrix4cd block = cfg_.space == dynamics::Space::full
                               ? dynamics::omega0_block(u_, cfg_.model.layout)
                               : Eigen::Matrix4cd(u_);
  const double fidelity = dynamics::gate_fidelity(block, cfg_.target);
  const double boundary = control::boundary_values(realized_).total();
  const double integral = ledger_ ? ledger_->integral_term() : 0.0;
  const double ledger_boundary = ledger_ ? ledger_->boundary_terms() : 0.0;

  const objective::CostBreakdown cost = objective::assemble_cost(
      fidelity, integral + ledger_boundary, boundary, dt_us * step_index_, cfg_.weights);
  const bool done = terminal_check(cost, cfg_.cost_threshold) || step_index_ >= cfg_.n_max;

  StepResult result;
  result.reward =
      tracker_.step_reward(dt_us, integral, done, fidelity, boundary, ledger_boundary);
  result.done = done;
  if (done) {
    done_ = true;
    final_cost_ = cost;
  }
  result.state = observe();
  return result;
}

GaussianPolicy::GaussianPolicy(int state_dim, const std::vector<int>& hidden, uint64_t seed,
                               double initial_log_std)
    : mean(state_dim, hidden, kActionDim, seed, /*final_scale=*/0.01),
      log_std(Eigen::VectorXd::Constant(kActionDim, initial_log_std)) {}

Eigen::VectorXd GaussianPolicy::params() const {
  Eigen::VectorXd flat(param_count());
  flat.head(mean.param_count()) = mean.params();
  flat.tail(log_std.size()) = log_std;
  return flat;
}

void GaussianPolicy::set_params(const Eigen::VectorXd& flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("policy parameter size mismatch");
  }
  mean.set_params(flat.head(mean.param_count()));
  log_std = flat.tail(log_std.size());
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& mean_out,
                                const Eigen::VectorXd& action) const {
  double lp = -0.5 * double(kActionDim) * kLog2Pi - log_std.sum();
  for (int i = 0; i < kActionDim; ++i) {
    const double z = (action(i) - mean_out(i)) / std::exp(log_std(i));
    lp -= 0.5 * z * z;
  }
  return lp;
}

double GaussianPolicy::entropy() const {
  return log_std.sum() + 0.5 * double(kActionDim) * (1.0 + kLog2Pi);
}

double mean_kl(const GaussianPolicy& old_policy, const GaussianPolicy& new_policy,
               const std::vector<Eigen::VectorXd>& states) {
  if (states.empty()) return 0.0;
  const Eigen::VectorXd so2 = (2.0 * old_policy.log_std.array()).exp();
  const Eigen::VectorXd sn2 = (2.0 * new_policy.log_std.array()).exp();
  double kl = 0.0;
  for (const auto& s : states) {
    const Eigen::VectorXd mo = old_policy.action_mean(s);
    const Eigen::VectorXd mn = new_policy.action_mean(s);
    for (int j = 0; j < kActionDim; ++j) {
      const double dm = mo(j) - mn(j);
      kl += new_policy.log_std(j) - old_policy.log_std(j) +
            (so2(j) + dm * dm) / (2.0 * sn2(j)) - 0.5;
    }
  }
  return kl / double(states.size());
}

Agent Agent::make(int state_dim, const TrustRegionConfig& cfg, int batch_steps, uint64_t seed,
                  const std::vector<int>& hidden) {
  GaussianPolicy policy(state_dim, hidden, rng::derive(seed, 0x706f6c /* "pol" */));
  mlp::Mlp value(state_dim, hidden, 1, rng::derive(seed, 0x76616c /* "val" */));
  mlp::Adam opt(value.param_count(), {cfg.value_lr, 0.9, 0.999, 1e-8});
  return Agent{std::move(policy), std::move(value), std::move(opt), cfg, batch_steps, seed};
}

double Episode::total_reward() const {
  double sum = 0.0;
  for (const auto& t : transitions) sum += t.reward;
  return sum;
}

std::vector<Episode> sample_batch(const Agent& agent, const EnvConfig& env_cfg, int n,
                                  BatchMode mode, uint64_t batch_seed) {
  if (n <= 0) throw std::invalid_argument("batch size must be positive");
  std::vector<Episode> episodes;
  int steps = 0;
  const Eigen::VectorXd stds = agent.policy.log_std.array().exp();
  for (uint64_t e = 0;; ++e) {
    if (mode == BatchMode::episodes && int(e) >= n) break;
    if (mode == BatchMode::steps && steps >= n) break;

    ControlEnv env(env_cfg);
    EnvState state = env.reset(rng::derive(batch_seed, kPurposeEnvNoise, e));
    rng::Stream actions(rng::derive(batch_seed, kPurposeActions, e));
    Episode ep;
    bool done = false;
    while (!done) {
      Eigen::VectorXd mean_out = agent.policy.action_mean(state.features);
      Eigen::VectorXd a(kActionDim);
      for (int i = 0; i < kActionDim; ++i) a(i) = mean_out(i) + stds(i) * actions.gaussian();
      auto result = env.step(a);
      ep.transitions.push_back({state.features, a, result.reward});
      state = result.state;
      done = result.done;
    }
    ep.terminal_cost = env.final_cost();
    ep.realized = env.realized();
    steps += ep.length();
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

namespace {

struct FlatBatch {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> returns;     // discounted return-to-go
  std::vector<double> advantages;  // possibly normalized
};

FlatBatch flatten(const std::vector<Episode>& batch, const mlp::Mlp& value,
                  const TrustRegionConfig& cfg) {
  FlatBatch f;
  for (const auto& ep : batch) {
    const int len = ep.length();
    std::vector<double> r2g(len);
    double acc = 0.0;
    for (int t = len - 1; t >= 0; --t) {
      acc = ep.transitions[t].reward + cfg.discount * acc;
      r2g[t] = acc;
    }
    std::vector<double> values(len);
    for (int t = 0; t < len; ++t) values[t] = value.forward(ep.transitions[t].state)(0);

    std::vector<double> adv(len);
    if (cfg.gae_lambda >= 0.0) {
      double gae = 0.0;
      for (int t = len - 1; t >= 0; --t) {
        const double next_v = (t + 1 < len) ? values[t + 1] : 0.0;
        const double delta = ep.transitions[t].reward + cfg.discount * next_v - values[t];
        gae = delta + cfg.discount * cfg.gae_lambda * gae;
        adv[t] = gae;
      }
    } else {
      for (int t = 0; t < len; ++t) adv[t] = r2g[t] - values[t];
    }
    for (int t = 0; t < len; ++t) {
      f.states.push_back(ep.transitions[t].state);
      f.actions.push_back(ep.transitions[t].action);
      f.returns.push_back(r2g[t]);
      f.advantages.push_back(adv[t]);
    }
  }
  if (cfg.normalize_advantages && f.advantages.size() > 1) {
    double mean = 0.0;
    for (double a : f.advantages) mean += a;
    mean /= double(f.advantages.size());
    double var = 0.0;
    for (double a : f.advantages) var += (a - mean) * (a - mean);
    var /= double(f.advantages.size());
    const double sd = std::sqrt(var) + 1e-8;
    for (double& a : f.advantages) a = (a - mean) / sd;
  }
  return f;
}

}  // namespace

UpdateDiagnostics trpo_update(Agent& agent, const std::vector<Episode>& batch) {
  if (batch.empty()) throw std::invalid_argument("batch must be nonempty");
  UpdateDiagnostics diag;
  for (const auto& ep : batch) diag.mean_return += ep.total_reward();
  diag.mean_return /= double(batch.size());
  diag.entropy = agent.policy.entropy();

  const FlatBatch f = flatten(batch, agent.value, agent.cfg);
  const int n = int(f.states.size());
  const int n_mean = agent.policy.mean.param_count();
  const int n_all = agent.policy.param_count();
  const Eigen::VectorXd sigma2 = (2.0 * agent.policy.log_std.array()).exp();

  // Cache forward passes of the current policy.
  std::vector<mlp::Mlp::Workspace> ws(n);
  std::vector<Eigen::VectorXd> mean_old(n);
  std::vector<double> logp_old(n);
  for (int i = 0; i < n; ++i) {
    mean_old[i] = agent.policy.mean.forward(f.states[i], ws[i]);
    logp_old[i] = agent.policy.log_prob(mean_old[i], f.actions[i]);
  }

  // Surrogate gradient at the current policy (REINFORCE form).
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_all);
  {
    Eigen::VectorXd gm = Eigen::VectorXd::Zero(n_mean);
    Eigen::VectorXd gs = Eigen::VectorXd::Zero(kActionDim);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd diff = f.actions[i] - mean_old[i];
      const Eigen::VectorXd dmu = f.advantages[i] * diff.cwiseQuotient(sigma2);
      agent.policy.mean.backward(ws[i], dmu, gm);
      gs.array() +=
          f.advantages[i] * (diff.array().square() / sigma2.array() - 1.0);
    }
    grad.head(n_mean) = gm / double(n);
    grad.tail(kActionDim) = gs / double(n);
  }

  // Fisher-vector product of the mean KL (Gauss-Newton form).
  auto fvp = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out_mean = Eigen::VectorXd::Zero(n_mean);
    const Eigen::VectorXd v_mean = v.head(n_mean);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd t = agent.policy.mean.jvp(ws[i], v_mean);
      agent.policy.mean.backward(ws[i], t.cwiseQuotient(sigma2), out_mean);
    }
    Eigen::VectorXd out(n_all);
    out.head(n_mean) = out_mean / double(n);
    out.tail(kActionDim) = 2.0 * v.tail(kActionDim);
    return (out + agent.cfg.cg_damping * v).eval();
  };

  // Conjugate gradient for F s = g.
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n_all);
  {
    Eigen::VectorXd r = grad;
    Eigen::VectorXd p = grad;
    double rs = r.squaredNorm();
    const double tol = 1e-12 * std::max(1.0, rs);
    for (int it = 0; it < agent.cfg.cg_iterations && rs > tol; ++it) {
      const Eigen::VectorXd fp = fvp(p);
      const double alpha = rs / std::max(p.dot(fp), 1e-300);
      s += alpha * p;
      r -= alpha * fp;
      const double rs_new = r.squaredNorm();
      p = r + (rs_new / rs) * p;
      rs = rs_new;
    }
  }

  const double shs = s.dot(fvp(s));
  if (shs <= 0.0 || !std::isfinite(shs)) {
    std::cerr << "ufoctl: trpo_update: degenerate curvature; keeping policy\n";
    return diag;
  }
  const Eigen::VectorXd full_step = std::sqrt(2.0 * agent.cfg.kl_threshold / shs) * s;

  const Eigen::VectorXd theta_old = agent.policy.params();
  double surrogate_old = 0.0;
  for (int i = 0; i < n; ++i) surrogate_old += f.advantages[i];
  surrogate_old /= double(n);

  GaussianPolicy trial = agent.policy;
  double frac = 1.0;
  for (int ls = 0; ls < agent.cfg.line_search_steps; ++ls, frac *= agent.cfg.line_search_shrink) {
    trial.set_params(theta_old + frac * full_step);
    const Eigen::VectorXd sig_n2 = (2.0 * trial.log_std.array()).exp();
    double surrogate = 0.0, kl = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd mean_new = trial.mean.forward(f.states[i]);
      surrogate +=
          std::exp(trial.log_prob(mean_new, f.actions[i]) - logp_old[i]) * f.advantages[i];
      // KL(old||new) for diagonal Gaussians.
      for (int j = 0; j < kActionDim; ++j) {
        const double dm = mean_old[i](j) - mean_new(j);
        kl += trial.log_std(j) - agent.policy.log_std(j) +
              (sigma2(j) + dm * dm) / (2.0 * sig_n2(j)) - 0.5;
      }
    }
    surrogate /= double(n);
    kl /= double(n);
    if (std::isfinite(surrogate) && std::isfinite(kl) && surrogate > surrogate_old &&
        kl <= agent.cfg.kl_threshold) {
      agent.policy.set_params(theta_old + frac * full_step);
      diag.kl = kl;
      diag.surrogate_improvement = surrogate - surrogate_old;
      diag.step_fraction = frac;
      diag.accepted = true;
      break;
    }
  }
  if (!diag.accepted) {
    std::cerr << "ufoctl: trpo_update: line search failed; keeping policy\n";
  }

  // Value regression on discounted returns.
  {
    Eigen::VectorXd vparams = agent.value.params();
    auto loss_grad = [&](Eigen::VectorXd* g) {
      double loss = 0.0;
      mlp::Mlp::Workspace w;
      for (int i = 0; i < n; ++i) {
        const double v = agent.value.forward(f.states[i], w)(0);
        const double err = v - f.returns[i];
        loss += err * err;
        if (g) {
          Eigen::VectorXd dLdy(1);
          dLdy(0) = 2.0 * err / double(n);
          agent.value.backward(w, dLdy, *g);
        }
      }
      return loss / double(n);
    };
    diag.value_loss_before = loss_grad(nullptr);
    for (int e = 0; e < agent.cfg.value_epochs; ++e) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(agent.value.param_count());
      loss_grad(&g);
      agent.value_opt.step(vparams, g);
      agent.value.set_params(vparams);
    }
    diag.value_loss_after = loss_grad(nullptr);
  }
  return diag;
}

double curriculum_advance(double alpha, double step) {
  return std::min(alpha + step, M_PI);
}

control::ControlTrajectory deterministic_rollout(const Agent& agent, const EnvConfig& env_cfg) {
  EnvConfig cfg = env_cfg;
  cfg.noise_sigma_mhz = 0.0;
  ControlEnv env(cfg);
  EnvState state = env.reset(0);
  bool done = false;
  while (!done) {
    const auto result = env.step(agent.policy.action_mean(state.features));
    state = result.state;
    done = result.done;
  }
  return env.realized();
}

namespace {
nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}
Eigen::VectorXd vec_from_json(const nlohmann::json& a) {
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}
}  // namespace

std::string agent_to_json(const Agent& agent, const std::string& config_hash) {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["seed"] = agent.seed;
  j["batch_steps"] = agent.batch_steps;
  j["hidden"] = agent.policy.mean.hidden_sizes();
  j["policy"] = {{"mean_params", vec_to_json(agent.policy.mean.params())},
                 {"log_std", vec_to_json(agent.policy.log_std)}};
  j["value"] = {{"params", vec_to_json(agent.value.params())},
                {"adam_m", vec_to_json(agent.value_opt.first_moment())},
                {"adam_v", vec_to_json(agent.value_opt.second_moment())},
                {"adam_t", agent.value_opt.steps_taken()}};
  j["trust"] = {{"kl_threshold", agent.cfg.kl_threshold},
                {"cg_damping", agent.cfg.cg_damping},
                {"cg_iterations", agent.cfg.cg_iterations},
                {"discount", agent.cfg.discount},
                {"gae_lambda", agent.cfg.gae_lambda},
                {"value_epochs", agent.cfg.value_epochs},
                {"value_lr", agent.cfg.value_lr}};
  return j.dump(2);
}

Agent agent_from_json(const std::string& text, int state_dim) {
  const nlohmann::json j = nlohmann::json::parse(text);
  TrustRegionConfig cfg;
  cfg.kl_threshold = j["trust"]["kl_threshold"].get<double>();
  cfg.cg_damping = j["trust"]["cg_damping"].get<double>();
  cfg.cg_iterations = j["trust"]["cg_iterations"].get<int>();
  cfg.discount = j["trust"]["discount"].get<double>();
  cfg.gae_lambda = j["trust"]["gae_lambda"].get<double>();
  cfg.value_epochs = j["trust"]["value_epochs"].get<int>();
  cfg.value_lr = j["trust"]["value_lr"].get<double>();
  const std::vector<int> hidden = j["hidden"].get<std::vector<int>>();
  Agent agent = Agent::make(state_dim, cfg, j["batch_steps"].get<int>(),
                            j["seed"].get<uint64_t>(), hidden);
  agent.policy.mean.set_params(vec_from_json(j["policy"]["mean_params"]));
  agent.policy.log_std = vec_from_json(j["policy"]["log_std"]);
  agent.value.set_params(vec_from_json(j["value"]["params"]));
  agent.value_opt.restore(vec_from_json(j["value"]["adam_m"]),
                          vec_from_json(j["value"]["adam_v"]), j["value"]["adam_t"].get<int>());
  return agent;
}

}  // namespace ufoctl::rl

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

#include "ufoctl/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ufoctl::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

uint64_t fnv1a(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config field '" + key + "': " + e.what());
  }
}

nlohmann::json ledger_json(const tswt::LeakageLedger& ledger) {
  return {{"boundary_start", ledger.boundary_start},
          {"boundary_end", ledger.boundary_end},
          {"derivative_terms", ledger.derivative_terms},
          {"integral_term", ledger.integral_term},
          {"l_tot", ledger.l_tot}};
}

nlohmann::json summary_json(const ExperimentConfig& cfg,
                            const control::ControlTrajectory& solution,
                            const objective::CostBreakdown& cost) {
  nlohmann::json j;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.seed;
  j["target"] = cfg.target;
  j["optimizer"] = cfg.optimizer;
  j["gate_time_ns"] = solution.duration_ns();
  j["steps"] = solution.steps.size();
  j["cost"] = {{"infidelity", cost.infidelity_term},
               {"leakage", cost.leakage_term},
               {"boundary", cost.boundary_term},
               {"time", cost.time_term},
               {"total", cost.total}};
  if (cfg.space_enum() == dynamics::Space::full && solution.steps.size() >= 3) {
    const auto frames = tswt::frames_along(solution, gmon::GmonModel::standard(cfg.eta_mhz));
    j["ledger"] = ledger_json(
        tswt::leakage_bound(frames, solution.dt_ns, gmon::GmonModel::standard(cfg.eta_mhz).layout));
  } else {
    j["ledger"] = nullptr;
  }
  return j;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  c.target = get_field<std::string>(j, "target", c.target);
  c.optimizer = get_field<std::string>(j, "optimizer", c.optimizer);
  c.seed = get_field<uint64_t>(j, "seed", c.seed);
  c.space = get_field<std::string>(j, "space", c.space);
  c.eta_mhz = get_field<double>(j, "eta_mhz", c.eta_mhz);
  c.dt_ns = get_field<double>(j, "dt_ns", c.dt_ns);
  c.n_max = get_field<int>(j, "n_max", c.n_max);
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    c.weights.chi = get_field<double>(w, "chi", c.weights.chi);
    c.weights.beta = get_field<double>(w, "beta", c.weights.beta);
    c.weights.mu = get_field<double>(w, "mu", c.weights.mu);
    c.weights.kappa = get_field<double>(w, "kappa", c.weights.kappa);
  }
  if (j.contains("noise")) {
    const auto& nj = j.at("noise");
    c.noise_sigma_mhz = get_field<double>(nj, "sigma_mhz", c.noise_sigma_mhz);
    c.eta_per_episode = get_field<bool>(nj, "eta_per_episode", c.eta_per_episode);
  }
  if (j.contains("filter")) {
    c.filter_bandwidth_mhz =
        get_field<double>(j.at("filter"), "bandwidth_mhz", c.filter_bandwidth_mhz);
  }
  c.amplitude_scale_mhz = get_field<double>(j, "amplitude_scale_mhz", c.amplitude_scale_mhz);
  if (j.contains("rl")) {
    const auto& r = j.at("rl");
    c.rl_iterations = get_field<int>(r, "iterations", c.rl_iterations);
    c.rl_batch = get_field<int>(r, "batch", c.rl_batch);
    c.rl_batch_mode = get_field<std::string>(r, "batch_mode", c.rl_batch_mode);
    c.trust_region_kl = get_field<double>(r, "trust_region_kl", c.trust_region_kl);
    c.discount = get_field<double>(r, "discount", c.discount);
    c.gae_lambda = get_field<double>(r, "gae_lambda", c.gae_lambda);
    c.hidden = get_field<std::vector<int>>(r, "hidden", c.hidden);
    c.cost_threshold = get_field<double>(r, "cost_threshold", c.cost_threshold);
    c.per_step_reward = get_field<bool>(r, "per_step_reward", c.per_step_reward);
    c.full_state_features = get_field<bool>(r, "full_state_features", c.full_state_features);
    c.paper_scale = get_field<bool>(r, "paper_scale", c.paper_scale);
  }
  if (j.contains("sgd")) {
    const auto& s = j.at("sgd");
    c.sgd_iterations = get_field<int>(s, "iterations", c.sgd_iterations);
    c.sgd_lr = get_field<double>(s, "lr", c.sgd_lr);
    c.fd_step = get_field<double>(s, "fd_step", c.fd_step);
    c.init_scale_mhz = get_field<double>(s, "init_scale_mhz", c.init_scale_mhz);
    c.sgd_steps = get_field<int>(s, "steps", c.sgd_steps);
  }
  c.output_dir = get_field<std::string>(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::json j;
  j["target"] = target;
  j["optimizer"] = optimizer;
  j["seed"] = seed;
  j["space"] = space;
  j["eta_mhz"] = eta_mhz;
  j["dt_ns"] = dt_ns;
  j["n_max"] = n_max;
  j["weights"] = {{"chi", weights.chi},
                  {"beta", weights.beta},
                  {"mu", weights.mu},
                  {"kappa", weights.kappa}};
  j["noise"] = {{"sigma_mhz", noise_sigma_mhz}, {"eta_per_episode", eta_per_episode}};
  j["filter"] = {{"bandwidth_mhz", filter_bandwidth_mhz}};
  j["amplitude_scale_mhz"] = amplitude_scale_mhz;
  j["rl"] = {{"iterations", rl_iterations},
             {"batch", rl_batch},
             {"batch_mode", rl_batch_mode},
             {"trust_region_kl", trust_region_kl},
             {"discount", discount},
             {"gae_lambda", gae_lambda},
             {"hidden", hidden},
             {"cost_threshold", cost_threshold},
             {"per_step_reward", per_step_reward},
             {"full_state_features", full_state_features},
             {"paper_scale", paper_scale}};
  j["sgd"] = {{"iterations", sgd_iterations},
              {"lr", sgd_lr},
              {"fd_step", fd_step},
              {"init_scale_mhz", init_scale_mhz},
              {"steps", sgd_steps}};
  j["output_dir"] = output_dir;
  return j.dump(2);
}

std::string ExperimentConfig::hash() const {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json_text())));
  return buf;
}

void ExperimentConfig::validate() const {
  if (optimizer != "rl" && optimizer != "sgd") {
    throw ConfigError("config field 'optimizer': must be \"rl\" or \"sgd\"");
  }
  if (space != "qubit" && space != "full") {
    throw ConfigError("config field 'space': must be \"qubit\" or \"full\"");
  }
  if (!(eta_mhz > 0.0)) throw ConfigError("config field 'eta_mhz': must be positive");
  if (!(dt_ns > 0.0)) throw ConfigError("config field 'dt_ns': must be positive");
  if (n_max < 1) throw ConfigError("config field 'n_max': must be >= 1");
  if (weights.chi < 0 || weights.beta < 0 || weights.mu < 0 || weights.kappa < 0) {
    throw ConfigError("config field 'weights': all weights must be nonnegative");
  }
  if (noise_sigma_mhz < 0.0) {
    throw ConfigError("config field 'noise.sigma_mhz': must be nonnegative");
  }
  if (amplitude_scale_mhz <= 0.0 || amplitude_scale_mhz > gmon::kAmplitudeRangeMhz) {
    throw ConfigError("config field 'amplitude_scale_mhz': must be in (0, 20]");
  }
  if (filter_bandwidth_mhz < 0.0 || filter_bandwidth_mhz > 500.0 / dt_ns) {
    throw ConfigError("config field 'filter.bandwidth_mhz': outside [0, sample_rate/2]");
  }
  if (rl_batch_mode != "steps" && rl_batch_mode != "episodes") {
    throw ConfigError("config field 'rl.batch_mode': must be \"steps\" or \"episodes\"");
  }
  if (rl_batch < 1 || rl_iterations < 0) {
    throw ConfigError("config field 'rl': batch must be >= 1, iterations >= 0");
  }
  if (sgd_iterations < 1 || sgd_steps < 1) {
    throw ConfigError("config field 'sgd': iterations and steps must be >= 1");
  }
  try {
    targets::parse_target(target);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config field 'target': ") + e.what());
  }
}

dynamics::Space ExperimentConfig::space_enum() const {
  return space == "full" ? dynamics::Space::full : dynamics::Space::qubit;
}

rl::EnvConfig ExperimentConfig::env_config() const {
  rl::EnvConfig env;
  env.model = gmon::GmonModel::standard(eta_mhz);
  env.target = gate().matrix;
  env.weights = weights;
  env.noise_sigma_mhz = noise_sigma_mhz;
  env.eta_per_episode = eta_per_episode;
  env.filter_bandwidth_mhz = filter_bandwidth_mhz;
  env.dt_ns = dt_ns;
  env.n_max = n_max;
  env.cost_threshold = cost_threshold;
  env.space = space_enum();
  env.full_state_features = full_state_features;
  env.per_step_reward = per_step_reward;
  env.amplitude_scale_mhz = amplitude_scale_mhz;
  return env;
}

rl::TrustRegionConfig ExperimentConfig::trust_config() const {
  rl::TrustRegionConfig t;
  t.kl_threshold = trust_region_kl;
  t.discount = discount;
  t.gae_lambda = gae_lambda;
  return t;
}

baseline::Problem ExperimentConfig::sgd_problem() const {
  baseline::Problem p;
  p.model = gmon::GmonModel::standard(eta_mhz);
  p.target = gate().matrix;
  p.weights = weights;
  p.space = space_enum();
  p.dt_ns = dt_ns;
  p.n_steps = sgd_steps;
  return p;
}

baseline::SgdConfig ExperimentConfig::sgd_config() const {
  baseline::SgdConfig s;
  s.adam.lr = sgd_lr;
  s.iterations = sgd_iterations;
  s.fd_step_mhz = fd_step;
  s.init_scale_mhz = init_scale_mhz;
  s.seed = seed;
  return s;
}

targets::GateTarget ExperimentConfig::gate() const { return targets::parse_target(target); }

void apply_seed_env_override(ExperimentConfig& cfg) {
  if (const char* env = std::getenv("UFOCTL_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      throw ConfigError("UFOCTL_SEED must be an unsigned integer");
    }
  }
}

TrainArtifacts cmd_train(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  const std::string hash = cfg.hash();
  TrainArtifacts art;
  art.summary_path = cfg.output_dir + "/summary.json";
  art.trajectory_path = cfg.output_dir + "/trajectory.json";
  art.history_path = cfg.output_dir + "/train_history.csv";

  control::ControlTrajectory solution;
  std::ostringstream csv;
  csv << "# ufoctl train v1 config_hash=" << hash << " seed=" << cfg.seed << "\n";

  if (cfg.optimizer == "rl") {
    art.checkpoint_path = cfg.output_dir + "/checkpoint.json";
    const rl::EnvConfig env = cfg.env_config();
    rl::Agent agent = rl::Agent::make(env.state_dim(), cfg.trust_config(),
                                      cfg.paper_scale ? 20000 : cfg.rl_batch, cfg.seed,
                                      cfg.hidden);
    const rl::BatchMode mode = cfg.paper_scale || cfg.rl_batch_mode == "episodes"
                                   ? rl::BatchMode::episodes
                                   : rl::BatchMode::steps;
    csv << "iteration,mean_return,mean_infidelity,mean_leakage,mean_boundary,mean_time,kl,"
           "entropy\n";
    for (int it = 0; it < cfg.rl_iterations; ++it) {
      const auto batch = rl::sample_batch(agent, env, agent.batch_steps, mode,
                                          rng::derive(cfg.seed, 0x697472 /* "itr" */, it));
      const auto diag = rl::trpo_update(agent, batch);
      objective::CostBreakdown mean{};
      for (const auto& ep : batch) {
        mean.infidelity_term += ep.terminal_cost.infidelity_term;
        mean.leakage_term += ep.terminal_cost.leakage_term;
        mean.boundary_term += ep.terminal_cost.boundary_term;
        mean.time_term += ep.terminal_cost.time_term;
      }
      const double n = double(batch.size());
      csv << it << ',' << fmt(diag.mean_return) << ',' << fmt(mean.infidelity_term / n) << ','
          << fmt(mean.leakage_term / n) << ',' << fmt(mean.boundary_term / n) << ','
          << fmt(mean.time_term / n) << ',' << fmt(diag.kl) << ',' << fmt(diag.entropy) << "\n";
    }
    solution = rl::deterministic_rollout(agent, env);
    write_file(art.checkpoint_path, rl::agent_to_json(agent, hash));
  } else {
    const baseline::Problem prob = cfg.sgd_problem();
    const baseline::SgdConfig scfg = cfg.sgd_config();
    const auto result = baseline::adam_optimize(prob, scfg);
    csv << "iteration,cost\n";
    for (size_t i = 0; i < result.cost_history.size(); ++i) {
      csv << i << ',' << fmt(result.cost_history[i]) << "\n";
    }
    solution = baseline::unflatten(result.best_params, prob.dt_ns);
  }

  const auto cost = objective::ufo_cost(solution, gmon::GmonModel::standard(cfg.eta_mhz),
                                        cfg.gate().matrix, cfg.weights, cfg.space_enum());
  write_file(art.history_path, csv.str());
  control::save_trajectory(solution, art.trajectory_path);
  write_file(art.summary_path, summary_json(cfg, solution, cost).dump(2) + "\n");
  return art;
}

std::string cmd_sweep_alpha(const ExperimentConfig& cfg, double gamma, double alpha_min,
                            double alpha_max, double alpha_step) {
  if (alpha_step <= 0.0) throw ConfigError("alpha step must be positive");
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = cfg.output_dir + "/sweep_alpha.csv";
  const auto reference = targets::synthesis_runtime();

  std::ostringstream csv;
  csv << "# ufoctl sweep-alpha v1 config_hash=" << cfg.hash() << " seed=" << cfg.seed
      << " reference_ns=" << fmt(reference.total_ns) << "\n";
  csv << "alpha,gamma,gate_time_ns,infidelity,leakage,boundary,time,total,success\n";

  rl::EnvConfig env = cfg.env_config();
  rl::Agent agent = rl::Agent::make(env.state_dim(), cfg.trust_config(),
                                    cfg.paper_scale ? 20000 : cfg.rl_batch, cfg.seed, cfg.hidden);
  const rl::BatchMode mode =
      cfg.rl_batch_mode == "episodes" ? rl::BatchMode::episodes : rl::BatchMode::steps;

  int point = 0;
  for (double alpha = alpha_min; alpha <= alpha_max + 1e-12;
       alpha = rl::curriculum_advance(alpha, alpha_step), ++point) {
    const auto target = targets::n_gate(alpha, gamma);
    control::ControlTrajectory solution;
    objective::CostBreakdown cost;
    if (cfg.optimizer == "rl") {
      env.target = target.matrix;
      // The agent carries over between alpha points (transfer across the
      // curriculum); only the batch seeds advance.
      for (int it = 0; it < cfg.rl_iterations; ++it) {
        const auto batch =
            rl::sample_batch(agent, env, agent.batch_steps, mode,
                             rng::derive(cfg.seed, 0x737770 /* "swp" */, point * 10000 + it));
        rl::trpo_update(agent, batch);
      }
      solution = rl::deterministic_rollout(agent, env);
      cost = objective::ufo_cost(solution, env.model, target.matrix, cfg.weights,
                                 cfg.space_enum());
    } else {
      baseline::Problem prob = cfg.sgd_problem();
      prob.target = target.matrix;
      baseline::SgdConfig scfg = cfg.sgd_config();
      scfg.seed = rng::derive(cfg.seed, 0x737770, point);
      const auto result = baseline::adam_optimize(prob, scfg);
      solution = baseline::unflatten(result.best_params, prob.dt_ns);
      cost = result.best_breakdown;
    }
    const bool success = cost.total <= cfg.cost_threshold;
    csv << fmt(alpha) << ',' << fmt(gamma) << ',' << fmt(solution.duration_ns()) << ','
        << fmt(cost.infidelity_term) << ',' << fmt(cost.leakage_term) << ','
        << fmt(cost.boundary_term) << ',' << fmt(cost.time_term) << ',' << fmt(cost.total) << ','
        << (success ? 1 : 0) << "\n";
    if (alpha >= M_PI) break;  // curriculum clamps at pi
  }
  write_file(path, csv.str());
  return path;
}

namespace {

control::ControlTrajectory load_trajectory_or_rollout(const ExperimentConfig& cfg,
                                                      const std::string& input_path) {
  std::ifstream in(input_path);
  if (!in) throw ConfigError("cannot open: " + input_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("policy")) {
    const rl::EnvConfig env = cfg.env_config();
    const rl::Agent agent = rl::agent_from_json(text, env.state_dim());
    return rl::deterministic_rollout(agent, env);
  }
  return control::trajectory_from_json_string(text);
}

}  // namespace

std::string cmd_robustness(const ExperimentConfig& cfg, const std::string& input_path,
                           const std::vector<double>& sigma_grid, int n_samples) {
  if (sigma_grid.empty()) throw ConfigError("sigma grid must be nonempty");
  if (n_samples < 2) throw ConfigError("robustness needs at least two samples per point");
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = cfg.output_dir + "/robustness.csv";
  const auto traj = load_trajectory_or_rollout(cfg, input_path);
  const auto model = gmon::GmonModel::standard(cfg.eta_mhz);
  const auto target = cfg.gate().matrix;

  std::ostringstream csv;
  csv << "# ufoctl robustness v1 config_hash=" << cfg.hash() << " seed=" << cfg.seed << "\n";
  csv << "sigma_mhz,f_ave,sigma_fidelity,n_samples,seed,f_ave_nielsen\n";
  for (size_t i = 0; i < sigma_grid.size(); ++i) {
    const uint64_t point_seed = rng::derive(cfg.seed, 0x726f62 /* "rob" */, i);
    const auto report = evaluate::fidelity_variance(traj, model, target, sigma_grid[i],
                                                    n_samples, point_seed, cfg.space_enum());
    csv << fmt(sigma_grid[i]) << ',' << fmt(report.f_ave_haar) << ','
        << fmt(report.sigma_fidelity) << ',' << n_samples << ',' << point_seed << ','
        << fmt(report.f_ave_nielsen) << "\n";
  }
  write_file(path, csv.str());
  return path;
}

std::string cmd_leakage_audit(const ExperimentConfig& cfg, const std::string& trajectory_path) {
  const auto traj = load_trajectory_or_rollout(cfg, trajectory_path);
  if (traj.steps.size() < 3) {
    throw ConfigError("leakage audit needs a trajectory with >= 3 steps");
  }
  const auto model = gmon::GmonModel::standard(cfg.eta_mhz);
  const auto frames = tswt::frames_along(traj, model);
  const auto ledger = tswt::leakage_bound(frames, traj.dt_ns, model.layout);
  const Eigen::MatrixXcd h_static = gmon::h0(model);
  std::vector<double> gaps(frames.size(), model.layout.gap);
  const double adiabatic = tswt::adiabatic_bound(tswt::hd_time_varying(frames, h_static),
                                                 tswt::hod_parts(frames), gaps,
                                                 traj.duration_us());
  const auto bare = dynamics::exact_leakage(traj, model, dynamics::Frame::bare);
  const auto dressed = dynamics::exact_leakage(traj, model, dynamics::Frame::dressed);

  nlohmann::json j;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.seed;
  j["ledger"] = ledger_json(ledger);
  j["adiabatic_bound"] = adiabatic;
  j["exact_bare"] = {{"max_amplitude", bare.max_amplitude},
                     {"mean_amplitude", bare.mean_amplitude},
                     {"max_population", bare.max_population},
                     {"mean_population", bare.mean_population}};
  j["exact_dressed"] = {{"max_amplitude", dressed.max_amplitude},
                        {"mean_amplitude", dressed.mean_amplitude},
                        {"max_population", dressed.max_population},
                        {"mean_population", dressed.mean_population}};
  j["dominance"] = {
      {"middle_over_retained", ledger.l_tot > 0.0 ? ledger.derivative_terms / ledger.l_tot : 0.0},
      {"adiabatic_over_direct", ledger.l_tot > 0.0 ? adiabatic / ledger.l_tot : 0.0}};
  j["exact_le_bound"] = dressed.max_amplitude <= ledger.l_tot;

  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = cfg.output_dir + "/leakage_audit.json";
  write_file(path, j.dump(2) + "\n");
  return path;
}

std::string cmd_evaluate(const ExperimentConfig& cfg, const std::string& trajectory_path) {
  const auto traj = load_trajectory_or_rollout(cfg, trajectory_path);
  const auto cost = objective::ufo_cost(traj, gmon::GmonModel::standard(cfg.eta_mhz),
                                        cfg.gate().matrix, cfg.weights, cfg.space_enum());
  std::filesystem::create_directories(cfg.output_dir);
  const std::string path = cfg.output_dir + "/evaluate.json";
  write_file(path, summary_json(cfg, traj, cost).dump(2) + "\n");
  return path;
}

}  // namespace ufoctl::cli

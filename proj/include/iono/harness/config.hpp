#pragma once

#include "iono/lie/policy.hpp"
#include "iono/mbrl/loop.hpp"
#include "iono/sim/params.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace iono::harness {

inline constexpr int kConfigFormatVersion = 1;

enum class Experiment { kLieSweep, kAnalyze, kMbrlTrain, kMbrlEval, kMimic };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::kLieSweep: return "lie-sweep";
    case Experiment::kAnalyze: return "analyze";
    case Experiment::kMbrlTrain: return "mbrl-train";
    case Experiment::kMbrlEval: return "mbrl-eval";
    case Experiment::kMimic: return "mimic";
  }
  return "?";
}

inline Experiment experiment_from_string(const std::string& s) {
  for (Experiment e : {Experiment::kLieSweep, Experiment::kAnalyze, Experiment::kMbrlTrain,
                       Experiment::kMbrlEval, Experiment::kMimic}) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + s + "'");
}

// Every section keeps values in the units named by its JSON keys; SI
// conversion happens only in the to_*() builders, so load/emit is exact.

struct SimSection {
  double dt_dynamics_s = 1e-3;
  double control_period_s = 1e-2;
  double noise_sigma = 0.01;
  double stop_angle_deg = 45.0;
  std::string integrator = "euler";
  std::string noise_injection = "per_control_period";
  double max_thrust_mN = 0.3;
};

struct InertialSection {
  double mass_mg = 50.0;
  double ixx_gmm2 = 1.984;
  double iyy_gmm2 = 1.983;
  double izz_gmm2 = 3.804;
  double arm_m = 0.01;
  double gravity_m_s2 = 9.81;
};

struct ThrustSection {
  std::vector<double> beta = {0.6, 0.6, 0.6, 0.6};
  double air_gap_um = 500.0;
  double ion_mobility_m2_per_Vs = 2e-4;
};

struct LieSection {
  std::vector<double> epsilons_s = {0.01, 0.02, 0.03, 0.04, 0.06, 0.08};
  double cap_s = 10.0;
  std::vector<std::vector<double>> actions_mN = {{0.15, 0.05, 0.05, 0.15},
                                                 {0.15, 0.15, 0.05, 0.05},
                                                 {0.05, 0.15, 0.15, 0.05},
                                                 {0.05, 0.05, 0.15, 0.15},
                                                 {0.1, 0.1, 0.1, 0.1}};
};

struct MpcSection {
  int horizon = 5;
  int num_samples = 500;
  double action_low_mN = 0.0;
  double action_high_mN = 0.3;
  std::string action_mode = "continuous";
};

struct RewardSection {
  double eta_deg = 10.0;
  std::string mode = "sliding";
  double lambda = 1.0;
};

struct TrainingSection {
  int epochs = 17;
  double lr = 0.0025;
  int batch = 18;
  int hidden = 250;
  std::string features = "attitude";
};

struct LoopSection {
  int num_seeds = 5;
  int paper_scale_seeds = 25;
  int num_trials = 10;
  int steps_per_trial = 1000;
  bool control_arm = true;
};

struct RandomizationSection {
  double inertia_variation_frac = 0.15;
  double init_angle_range_deg = 22.5;
};

struct EvalSection {
  std::string model_path;
  int steps = 1000;
  bool randomize = false;
};

struct MimicSection {
  double initial_theta_deg = 10.0;
  double initial_phi_deg = -10.0;
  int num_trials = 4;
  int logged_actions = 25;
  double reference_epsilon_s = 0.05;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::kLieSweep;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  SimSection sim;
  InertialSection inertial;
  ThrustSection thrust;
  LieSection lie;
  MpcSection mpc;
  RewardSection reward;
  TrainingSection training;
  LoopSection loop;
  RandomizationSection randomization;
  EvalSection eval;
  MimicSection mimic;

  SimConfig to_sim(std::uint64_t seed = 0) const {
    SimConfig s;
    s.dt_dynamics = sim.dt_dynamics_s;
    s.control_period = sim.control_period_s;
    s.noise_sigma = sim.noise_sigma;
    s.stop_angle = deg_to_rad(sim.stop_angle_deg);
    s.integrator = sim.integrator == "rk4" ? Integrator::kRk4 : Integrator::kEuler;
    s.noise_injection = sim.noise_injection == "per_substep" ? NoiseInjection::kPerSubstep
                                                             : NoiseInjection::kPerControlPeriod;
    s.max_thrust = mn_to_n(sim.max_thrust_mN);
    s.seed = seed;
    return s;
  }

  InertialConfig to_inertial() const {
    return {mg_to_kg(inertial.mass_mg), gmm2_to_kgm2(inertial.ixx_gmm2),
            gmm2_to_kgm2(inertial.iyy_gmm2), gmm2_to_kgm2(inertial.izz_gmm2), inertial.arm_m,
            inertial.gravity_m_s2};
  }

  ThrustParams to_thrust() const {
    ThrustParams t;
    for (std::size_t i = 0; i < 4; ++i) t.beta[i] = thrust.beta[i];
    t.d = thrust.air_gap_um * 1e-6;
    t.mu = thrust.ion_mobility_m2_per_Vs;
    return t;
  }

  lie::LieSequenceConfig to_lie(double epsilon) const {
    lie::LieSequenceConfig c;
    c.epsilon = epsilon;
    c.control_period = sim.control_period_s;
    for (std::size_t i = 0; i < lie::kNumActions; ++i) {
      const auto& a = lie.actions_mN[i];
      c.actions[i] = ThrusterCommand::from_millinewtons(a[0], a[1], a[2], a[3]);
    }
    return c;
  }

  mbrl::MpcConfig to_mpc() const {
    mbrl::MpcConfig m;
    m.horizon = mpc.horizon;
    m.num_samples = mpc.num_samples;
    m.action_low = mn_to_n(mpc.action_low_mN);
    m.action_high = mn_to_n(mpc.action_high_mN);
    m.action_mode = mpc.action_mode == "discrete-lie" ? mbrl::ActionMode::kDiscreteLie
                                                      : mbrl::ActionMode::kContinuous;
    m.lie_actions = to_lie(mimic.reference_epsilon_s);
    return m;
  }

  mbrl::RewardConfig to_reward() const {
    mbrl::RewardConfig r;
    r.eta = deg_to_rad(reward.eta_deg);
    r.mode = reward.mode == "naive" ? mbrl::RewardMode::kNaive : mbrl::RewardMode::kSliding;
    r.lambda = reward.lambda;
    return r;
  }

  mbrl::TrainConfig to_train() const {
    mbrl::TrainConfig t;
    t.epochs = training.epochs;
    t.lr = training.lr;
    t.batch = training.batch;
    t.hidden = training.hidden;
    t.features = training.features == "full" ? mbrl::FeatureMap::full() : mbrl::FeatureMap::attitude();
    return t;
  }

  mbrl::LoopConfig to_loop() const {
    mbrl::LoopConfig l;
    l.num_trials = loop.num_trials;
    l.steps_per_trial = loop.steps_per_trial;
    l.train = to_train();
    l.mpc = to_mpc();
    l.reward = to_reward();
    return l;
  }

  /// Throws ConfigError on any invariant violation.
  void validate() const {
    auto check = [](bool ok, const std::string& what) {
      if (!ok) throw ConfigError(what);
    };
    check(sim.integrator == "euler" || sim.integrator == "rk4", "sim.integrator must be euler or rk4");
    check(sim.noise_injection == "per_control_period" || sim.noise_injection == "per_substep",
          "sim.noise_injection must be per_control_period or per_substep");
    check(thrust.beta.size() == 4, "thrust.beta needs four entries");
    check(lie.actions_mN.size() == lie::kNumActions, "lie.actions_mN needs five actions");
    for (const auto& a : lie.actions_mN) check(a.size() == 4, "each Lie action needs four forces");
    check(!lie.epsilons_s.empty(), "lie.epsilons_s must not be empty");
    check(lie.cap_s > 0.0, "lie.cap_s must be positive");
    check(mpc.action_mode == "continuous" || mpc.action_mode == "discrete-lie",
          "mpc.action_mode must be continuous or discrete-lie");
    check(reward.mode == "sliding" || reward.mode == "naive", "reward.mode must be sliding or naive");
    check(training.features == "attitude" || training.features == "full",
          "training.features must be attitude or full");
    check(loop.num_seeds >= 1 && loop.paper_scale_seeds >= 1, "seed counts must be positive");
    check(loop.num_trials >= 2, "loop.num_trials must be at least 2");
    check(loop.steps_per_trial >= 1 && loop.steps_per_trial <= mbrl::kStepsPerTrial,
          "loop.steps_per_trial must lie in [1, 1000]");
    check(randomization.inertia_variation_frac >= 0.0 && randomization.inertia_variation_frac < 0.5,
          "randomization.inertia_variation_frac must lie in [0, 0.5)");
    check(randomization.init_angle_range_deg > 0.0 &&
              randomization.init_angle_range_deg < sim.stop_angle_deg,
          "randomization.init_angle_range_deg must lie in (0, stop_angle_deg)");
    check(eval.steps >= 1 && eval.steps <= mbrl::kStepsPerTrial, "eval.steps must lie in [1, 1000]");
    check(mimic.num_trials >= 2 && mimic.logged_actions >= 1, "invalid mimic settings");
    check(std::abs(mimic.initial_theta_deg) < sim.stop_angle_deg &&
              std::abs(mimic.initial_phi_deg) < sim.stop_angle_deg,
          "mimic initial attitude must be inside the stop angle");
    try {
      to_sim().validate();
      to_inertial().validate();
      to_thrust().validate();
      for (double e : lie.epsilons_s) to_lie(e).validate();
      to_lie(mimic.reference_epsilon_s).validate();
      to_mpc().validate();
      to_reward().validate(deg_to_rad(sim.stop_angle_deg));
      const auto t = to_train();
      check(t.epochs >= 1 && t.batch >= 1 && t.hidden >= 1 && t.lr > 0.0,
            "invalid training hyperparameters");
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline nlohmann::json to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  json j;
  j["format_version"] = kConfigFormatVersion;
  j["experiment"] = to_string(c.experiment);
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["sim"] = {{"dt_dynamics_s", c.sim.dt_dynamics_s},
              {"control_period_s", c.sim.control_period_s},
              {"noise_sigma", c.sim.noise_sigma},
              {"stop_angle_deg", c.sim.stop_angle_deg},
              {"integrator", c.sim.integrator},
              {"noise_injection", c.sim.noise_injection},
              {"max_thrust_mN", c.sim.max_thrust_mN}};
  j["inertial"] = {{"mass_mg", c.inertial.mass_mg},   {"ixx_gmm2", c.inertial.ixx_gmm2},
                   {"iyy_gmm2", c.inertial.iyy_gmm2}, {"izz_gmm2", c.inertial.izz_gmm2},
                   {"arm_m", c.inertial.arm_m},       {"gravity_m_s2", c.inertial.gravity_m_s2}};
  j["thrust"] = {{"beta", c.thrust.beta},
                 {"air_gap_um", c.thrust.air_gap_um},
                 {"ion_mobility_m2_per_Vs", c.thrust.ion_mobility_m2_per_Vs}};
  j["lie"] = {{"epsilons_s", c.lie.epsilons_s}, {"cap_s", c.lie.cap_s}, {"actions_mN", c.lie.actions_mN}};
  j["mpc"] = {{"horizon", c.mpc.horizon},
              {"num_samples", c.mpc.num_samples},
              {"action_low_mN", c.mpc.action_low_mN},
              {"action_high_mN", c.mpc.action_high_mN},
              {"action_mode", c.mpc.action_mode}};
  j["reward"] = {{"eta_deg", c.reward.eta_deg}, {"mode", c.reward.mode}, {"lambda", c.reward.lambda}};
  j["training"] = {{"epochs", c.training.epochs},
                   {"lr", c.training.lr},
                   {"batch", c.training.batch},
                   {"hidden", c.training.hidden},
                   {"features", c.training.features}};
  j["loop"] = {{"num_seeds", c.loop.num_seeds},
               {"paper_scale_seeds", c.loop.paper_scale_seeds},
               {"num_trials", c.loop.num_trials},
               {"steps_per_trial", c.loop.steps_per_trial},
               {"control_arm", c.loop.control_arm}};
  j["randomization"] = {{"inertia_variation_frac", c.randomization.inertia_variation_frac},
                        {"init_angle_range_deg", c.randomization.init_angle_range_deg}};
  j["eval"] = {{"model_path", c.eval.model_path}, {"steps", c.eval.steps}, {"randomize", c.eval.randomize}};
  j["mimic"] = {{"initial_theta_deg", c.mimic.initial_theta_deg},
                {"initial_phi_deg", c.mimic.initial_phi_deg},
                {"num_trials", c.mimic.num_trials},
                {"logged_actions", c.mimic.logged_actions},
                {"reference_epsilon_s", c.mimic.reference_epsilon_s}};
  return j;
}

/// Parses a config document; absent keys keep their defaults, unknown keys
/// are rejected so unit-less or misspelled settings cannot slip through.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::read;
  using detail::reject_unknown;
  ExperimentConfig c;
  try {
    reject_unknown(j,
                   {"format_version", "experiment", "master_seed", "output_dir", "sim", "inertial",
                    "thrust", "lie", "mpc", "reward", "training", "loop", "randomization", "eval",
                    "mimic"},
                   "config");
    if (j.contains("format_version") && j.at("format_version").get<int>() != kConfigFormatVersion) {
      throw ConfigError("unsupported config format_version");
    }
    if (j.contains("experiment")) c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
    read(j, "master_seed", c.master_seed);
    read(j, "output_dir", c.output_dir);
    if (j.contains("sim")) {
      const auto& s = j.at("sim");
      reject_unknown(s, {"dt_dynamics_s", "control_period_s", "noise_sigma", "stop_angle_deg",
                         "integrator", "noise_injection", "max_thrust_mN"}, "sim");
      read(s, "dt_dynamics_s", c.sim.dt_dynamics_s);
      read(s, "control_period_s", c.sim.control_period_s);
      read(s, "noise_sigma", c.sim.noise_sigma);
      read(s, "stop_angle_deg", c.sim.stop_angle_deg);
      read(s, "integrator", c.sim.integrator);
      read(s, "noise_injection", c.sim.noise_injection);
      read(s, "max_thrust_mN", c.sim.max_thrust_mN);
    }
    if (j.contains("inertial")) {
      const auto& s = j.at("inertial");
      reject_unknown(s, {"mass_mg", "ixx_gmm2", "iyy_gmm2", "izz_gmm2", "arm_m", "gravity_m_s2"},
                     "inertial");
      read(s, "mass_mg", c.inertial.mass_mg);
      read(s, "ixx_gmm2", c.inertial.ixx_gmm2);
      read(s, "iyy_gmm2", c.inertial.iyy_gmm2);
      read(s, "izz_gmm2", c.inertial.izz_gmm2);
      read(s, "arm_m", c.inertial.arm_m);
      read(s, "gravity_m_s2", c.inertial.gravity_m_s2);
    }
    if (j.contains("thrust")) {
      const auto& s = j.at("thrust");
      reject_unknown(s, {"beta", "air_gap_um", "ion_mobility_m2_per_Vs"}, "thrust");
      read(s, "beta", c.thrust.beta);
      read(s, "air_gap_um", c.thrust.air_gap_um);
      read(s, "ion_mobility_m2_per_Vs", c.thrust.ion_mobility_m2_per_Vs);
    }
    if (j.contains("lie")) {
      const auto& s = j.at("lie");
      reject_unknown(s, {"epsilons_s", "cap_s", "actions_mN"}, "lie");
      read(s, "epsilons_s", c.lie.epsilons_s);
      read(s, "cap_s", c.lie.cap_s);
      read(s, "actions_mN", c.lie.actions_mN);
    }
    if (j.contains("mpc")) {
      const auto& s = j.at("mpc");
      reject_unknown(s, {"horizon", "num_samples", "action_low_mN", "action_high_mN", "action_mode"}, "mpc");
      read(s, "horizon", c.mpc.horizon);
      read(s, "num_samples", c.mpc.num_samples);
      read(s, "action_low_mN", c.mpc.action_low_mN);
      read(s, "action_high_mN", c.mpc.action_high_mN);
      read(s, "action_mode", c.mpc.action_mode);
    }
    if (j.contains("reward")) {
      const auto& s = j.at("reward");
      reject_unknown(s, {"eta_deg", "mode", "lambda"}, "reward");
      read(s, "eta_deg", c.reward.eta_deg);
      read(s, "mode", c.reward.mode);
      read(s, "lambda", c.reward.lambda);
    }
    if (j.contains("training")) {
      const auto& s = j.at("training");
      reject_unknown(s, {"epochs", "lr", "batch", "hidden", "features"}, "training");
      read(s, "epochs", c.training.epochs);
      read(s, "lr", c.training.lr);
      read(s, "batch", c.training.batch);
      read(s, "hidden", c.training.hidden);
      read(s, "features", c.training.features);
    }
    if (j.contains("loop")) {
      const auto& s = j.at("loop");
      reject_unknown(s, {"num_seeds", "paper_scale_seeds", "num_trials", "steps_per_trial", "control_arm"},
                     "loop");
      read(s, "num_seeds", c.loop.num_seeds);
      read(s, "paper_scale_seeds", c.loop.paper_scale_seeds);
      read(s, "num_trials", c.loop.num_trials);
      read(s, "steps_per_trial", c.loop.steps_per_trial);
      read(s, "control_arm", c.loop.control_arm);
    }
    if (j.contains("randomization")) {
      const auto& s = j.at("randomization");
      reject_unknown(s, {"inertia_variation_frac", "init_angle_range_deg"}, "randomization");
      read(s, "inertia_variation_frac", c.randomization.inertia_variation_frac);
      read(s, "init_angle_range_deg", c.randomization.init_angle_range_deg);
    }
    if (j.contains("eval")) {
      const auto& s = j.at("eval");
      reject_unknown(s, {"model_path", "steps", "randomize"}, "eval");
      read(s, "model_path", c.eval.model_path);
      read(s, "steps", c.eval.steps);
      read(s, "randomize", c.eval.randomize);
    }
    if (j.contains("mimic")) {
      const auto& s = j.at("mimic");
      reject_unknown(s, {"initial_theta_deg", "initial_phi_deg", "num_trials", "logged_actions",
                         "reference_epsilon_s"}, "mimic");
      read(s, "initial_theta_deg", c.mimic.initial_theta_deg);
      read(s, "initial_phi_deg", c.mimic.initial_phi_deg);
      read(s, "num_trials", c.mimic.num_trials);
      read(s, "logged_actions", c.mimic.logged_actions);
      read(s, "reference_epsilon_s", c.mimic.reference_epsilon_s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace iono::harness

#pragma once

#include "iono/analysis/controllability.hpp"
#include "iono/analysis/linearize.hpp"
#include "iono/harness/config.hpp"
#include "iono/harness/csv.hpp"
#include "iono/harness/randomize.hpp"
#include "iono/lie/sweep.hpp"
#include "iono/mbrl/loop.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace iono::harness {

inline constexpr int kReportFormatVersion = 1;

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  std::filesystem::path out_dir;  // empty: config output_dir
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
  bool force = false;
  std::string model_path;  // empty: config eval.model_path
};

inline std::uint64_t master_seed(const ExperimentConfig& cfg, const RunOptions& opt) {
  return opt.seed.value_or(cfg.master_seed);
}

inline std::filesystem::path output_dir(const ExperimentConfig& cfg, const RunOptions& opt) {
  return opt.out_dir.empty() ? std::filesystem::path(cfg.output_dir) : opt.out_dir;
}

// ---------------------------------------------------------------- lie-sweep

inline std::vector<lie::SweepRow> cmd_lie_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = output_dir(cfg, opt);
  ensure_directory(dir);
  const auto rows = lie::lie_sweep(cfg.lie.epsilons_s, cfg.to_sim(master_seed(cfg, opt)),
                                   cfg.to_inertial(), cfg.lie.cap_s, cfg.to_lie(cfg.lie.epsilons_s.front()));
  CsvTable t({"epsilon_s", "yaw_rate_deg_per_s", "stop_time_s"});
  for (const auto& r : rows) t.row() << r.epsilon << r.yaw_rate_deg_s << r.stop_time_s;
  write_csv(dir / "lie_sweep.csv", t);
  return rows;
}

// ------------------------------------------------------------------ analyze

inline nlohmann::json linear_system_json(const analysis::LinearSystem& sys) {
  return {{"state_labels", sys.state_labels},
          {"input_labels", sys.input_labels},
          {"A", analysis::to_json(sys.a)},
          {"B", analysis::to_json(sys.b)},
          {"equilibrium_residual", sys.equilibrium_residual}};
}

inline nlohmann::json cmd_analyze(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = output_dir(cfg, opt);
  ensure_directory(dir);
  const InertialConfig inertial = cfg.to_inertial();
  const ThrusterCommand hover = analysis::hover_command(inertial);
  const analysis::LinearSystem full = analysis::linearize(State12{}, hover, inertial);
  const analysis::LinearSystem att = analysis::attitude_subsystem(full, inertial);

  nlohmann::json j;
  j["format_version"] = kReportFormatVersion;
  j["operating_point"] = {{"state", std::vector<double>(kStateDim, 0.0)},
                          {"command_N", std::vector<double>(hover.f.data(), hover.f.data() + 4)}};
  j["full"] = linear_system_json(full);
  j["full"]["report"] = analysis::to_json(analysis::analyze_yaw(full));
  j["attitude"] = linear_system_json(att);
  j["attitude"]["report"] = analysis::to_json(analysis::analyze_yaw(att));
  auto variants = nlohmann::json::array();
  for (const AssemblyVariant& v : kAssemblyVariants) {
    const InertialConfig si = v.to_inertial(cfg.inertial.arm_m, cfg.inertial.gravity_m_s2);
    variants.push_back({{"name", v.name},
                        {"mass_kg", si.mass},
                        {"ixx_kg_m2", si.ixx},
                        {"iyy_kg_m2", si.iyy},
                        {"izz_kg_m2", si.izz}});
  }
  j["assembly_variants"] = variants;
  write_json(dir / "analysis.json", j);
  return j;
}

// --------------------------------------------------------------- mbrl-train

struct CurveRow {
  int seed = 0;
  bool variation = true;
  mbrl::TrialStats stats;
};

struct TrainOutput {
  std::vector<CurveRow> rows;  // sorted by (seed, trial, variation)
  std::vector<mbrl::CurvePoint> curve_variation;
  std::vector<mbrl::CurvePoint> curve_control;
};

inline std::string model_filename(int seed, bool variation) {
  return "model_seed" + std::to_string(seed) + (variation ? "_variation" : "_novariation") + ".json";
}

inline int num_seeds(const ExperimentConfig& cfg, const RunOptions& opt) {
  return opt.paper_scale ? cfg.loop.paper_scale_seeds : cfg.loop.num_seeds;
}

/// One learning run per (seed, arm). The randomized arm varies inertia and
/// initial angles; the control arm keeps the nominal robot at rest.
inline TrainOutput cmd_mbrl_train(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = output_dir(cfg, opt);
  const auto csv_path = dir / "learning_curve.csv";
  if (std::filesystem::exists(csv_path) && !opt.force)
    throw IoError(csv_path.string() + " already exists; pass --force to overwrite");
  ensure_directory(dir / "models");

  const std::uint64_t exp = experiment_seed(master_seed(cfg, opt), Stream::kMbrlTrain);
  const mbrl::LoopConfig loop = cfg.to_loop();
  const int seeds = num_seeds(cfg, opt);
  std::vector<bool> arms = {true};
  if (cfg.loop.control_arm) arms.push_back(false);

  TrainOutput out;
  std::vector<mbrl::RobotRun> runs_var, runs_ctl;
  for (int s = 0; s < seeds; ++s) {
    for (bool variation : arms) {
      const std::uint64_t rs = robot_seed(exp, s, variation);
      const RobotEnvFactory factory(cfg.to_sim(), cfg.to_inertial(),
                                    variation ? randomization_from(cfg) : Randomization::none(), rs);
      std::clog << "mbrl-train: seed " << s << (variation ? " (variation)" : " (no variation)") << '\n';
      mbrl::RobotRun run = mbrl::run_robot(factory, loop, rs);
      for (const auto& st : run.trials) out.rows.push_back({s, variation, st});
      write_json(dir / "models" / model_filename(s, variation), mbrl::to_json(run.final_model));
      (variation ? runs_var : runs_ctl).push_back(std::move(run));
    }
  }
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const CurveRow& a, const CurveRow& b) {
    if (a.seed != b.seed) return a.seed < b.seed;
    if (a.stats.trial != b.stats.trial) return a.stats.trial < b.stats.trial;
    return a.variation > b.variation;
  });
  out.curve_variation = mbrl::aggregate_rewards(runs_var);
  out.curve_control = mbrl::aggregate_rewards(runs_ctl);

  CsvTable t({"seed", "trial", "variation", "episode_reward", "yaw_rate_deg_per_s", "crashed", "steps"});
  for (const auto& r : out.rows)
    t.row() << r.seed << r.stats.trial << r.variation << r.stats.episode_reward << r.stats.yaw_rate_deg_s
            << r.stats.crashed << r.stats.steps;
  write_csv(csv_path, t);

  CsvTable summary({"variation", "trial", "median_reward", "p65_reward", "p95_reward"});
  for (bool variation : arms)
    for (const auto& p : variation ? out.curve_variation : out.curve_control)
      summary.row() << variation << p.trial << p.median << p.p65 << p.p95;
  write_csv(dir / "learning_curve_summary.csv", summary);
  return out;
}

// ---------------------------------------------------------------- mbrl-eval

/// Sign changes, skipping exact zeros.
inline int zero_crossings(const std::vector<double>& v) {
  int n = 0;
  double prev = 0.0;
  for (double x : v) {
    if (x == 0.0) continue;
    if (prev != 0.0 && (x > 0.0) != (prev > 0.0)) ++n;
    prev = x;
  }
  return n;
}

struct EvalOutput {
  TrialRecord record;
  int theta_zero_crossings = 0;
  int phi_zero_crossings = 0;
  nlohmann::json summary;
};

inline mbrl::DynamicsModel load_model(const std::filesystem::path& path) {
  try {
    return mbrl::model_from_json(read_json(path));
  } catch (const DomainError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline EvalOutput cmd_mbrl_eval(const ExperimentConfig& cfg, const RunOptions& opt) {
  const std::string model_path = opt.model_path.empty() ? cfg.eval.model_path : opt.model_path;
  if (model_path.empty()) throw ConfigError("mbrl-eval needs a model (--model or eval.model_path)");
  const mbrl::DynamicsModel model = load_model(model_path);
  const auto dir = output_dir(cfg, opt);
  ensure_directory(dir);

  const std::uint64_t exp = experiment_seed(master_seed(cfg, opt), Stream::kMbrlEval);
  const RobotEnvFactory factory(cfg.to_sim(), cfg.to_inertial(),
                                cfg.eval.randomize ? randomization_from(cfg) : Randomization::none(),
                                derive_seed(exp, 0));
  Environment env = factory(0, 0);
  Rng rng(derive_seed(exp, 1));
  const mbrl::TrialResult r =
      mbrl::run_trial(env, &model, cfg.to_mpc(), cfg.to_reward(), rng, cfg.eval.steps);

  EvalOutput out;
  out.record = r.record;
  const double period = cfg.sim.control_period_s;
  CsvTable t({"t_s", "X_m", "Y_m", "Z_m", "psi_rad", "theta_rad", "phi_rad", "vx_m_per_s", "vy_m_per_s",
              "vz_m_per_s", "wx_rad_per_s", "wy_rad_per_s", "wz_rad_per_s", "F1_N", "F2_N", "F3_N", "F4_N",
              "reward"});
  std::vector<double> theta, phi;
  for (std::size_t k = 0; k < r.record.log.size(); ++k) {
    const TrialStep& s = r.record.log[k];
    auto row = t.row();
    row << static_cast<double>(k + 1) * period;
    for (int i = 0; i < kStateDim; ++i) row << s.x_next[i];
    for (int i = 0; i < 4; ++i) row << s.u.f[i];
    row << s.reward;
    theta.push_back(s.x_next.theta());
    phi.push_back(s.x_next.phi());
  }
  write_csv(dir / "trajectory.csv", t);

  out.theta_zero_crossings = zero_crossings(theta);
  out.phi_zero_crossings = zero_crossings(phi);
  out.summary = {{"format_version", kReportFormatVersion},
                 {"steps", r.record.summary.steps},
                 {"crashed", r.record.summary.crashed},
                 {"episode_reward", r.record.summary.episode_reward},
                 {"yaw_rate_deg_per_s", r.record.summary.yaw_rate_deg_s},
                 {"theta_zero_crossings", out.theta_zero_crossings},
                 {"phi_zero_crossings", out.phi_zero_crossings}};
  write_json(dir / "eval_summary.json", out.summary);
  return out;
}

// -------------------------------------------------------------------- mimic

struct MimicRow {
  int step = 0;
  int chosen = 0;
  int reference = 0;
  bool match = false;
};

struct MimicOutput {
  std::vector<MimicRow> rows;
  double agreement = 0.0;
  std::vector<int> all_labels;  // every label of the logged episode
};

/// Learns with actions restricted to the five Lie commands on a symmetric
/// robot started off-level, then compares the first chosen actions to the
/// open-loop Lie schedule.
inline MimicOutput cmd_mimic(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto dir = output_dir(cfg, opt);
  ensure_directory(dir);
  InertialConfig inertial = cfg.to_inertial();
  inertial.ixx = inertial.iyy = 0.5 * (inertial.ixx + inertial.iyy);

  State12 x0;
  x0.v[kTheta] = deg_to_rad(cfg.mimic.initial_theta_deg);
  x0.v[kPhi] = deg_to_rad(cfg.mimic.initial_phi_deg);

  mbrl::LoopConfig loop = cfg.to_loop();
  loop.mpc.action_mode = mbrl::ActionMode::kDiscreteLie;
  loop.num_trials = cfg.mimic.num_trials;

  const std::uint64_t exp = experiment_seed(master_seed(cfg, opt), Stream::kMimic);
  const SimConfig sim = cfg.to_sim();
  const mbrl::EnvFactory factory = [&](int trial, int episode) {
    SimConfig s = sim;
    s.seed = derive_seed(derive_seed(exp, static_cast<std::uint64_t>(trial) + 1), static_cast<std::uint64_t>(episode));
    return Environment(s, inertial, x0);
  };
  mbrl::Learner learner(factory, loop, derive_seed(exp, 0));
  learner.bootstrap();
  mbrl::TrialResult last;
  for (int t = 1; t < loop.num_trials; ++t) last = learner.mpc_trial();

  const lie::LieSequenceConfig ref = cfg.to_lie(cfg.mimic.reference_epsilon_s);
  MimicOutput out;
  out.all_labels = last.labels;
  const int n = std::min<int>(cfg.mimic.logged_actions, static_cast<int>(last.labels.size()));
  int matches = 0;
  for (int k = 0; k < n; ++k) {
    MimicRow r;
    r.step = k;
    r.chosen = last.labels[static_cast<std::size_t>(k)];
    r.reference = static_cast<int>(lie::lie_phase(k * ref.control_period, ref));
    r.match = r.chosen == r.reference;
    matches += r.match ? 1 : 0;
    out.rows.push_back(r);
  }
  out.agreement = n > 0 ? static_cast<double>(matches) / n : 0.0;

  CsvTable t({"step", "chosen_label", "lie_reference_label", "match"});
  for (const auto& r : out.rows)
    t.row() << r.step << std::string(lie::kActionLabels[static_cast<std::size_t>(r.chosen)])
            << std::string(lie::kActionLabels[static_cast<std::size_t>(r.reference)]) << r.match;
  // Summary row: agreement fraction in the match column.
  t.row() << "agreement" << "" << "" << out.agreement;
  write_csv(dir / "mimic_actions.csv", t);
  return out;
}

inline void run_command(Experiment e, const ExperimentConfig& cfg, const RunOptions& opt) {
  switch (e) {
    case Experiment::kLieSweep: cmd_lie_sweep(cfg, opt); return;
    case Experiment::kAnalyze: cmd_analyze(cfg, opt); return;
    case Experiment::kMbrlTrain: cmd_mbrl_train(cfg, opt); return;
    case Experiment::kMbrlEval: cmd_mbrl_eval(cfg, opt); return;
    case Experiment::kMimic: cmd_mimic(cfg, opt); return;
  }
}

}  // namespace iono::harness

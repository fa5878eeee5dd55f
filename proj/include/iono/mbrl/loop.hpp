#pragma once

#include "iono/mbrl/trial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace iono::mbrl {

struct LoopConfig {
  int num_trials = 10;
  int steps_per_trial = kStepsPerTrial;
  TrainConfig train;
  MpcConfig mpc;
  RewardConfig reward;
};

/// Builds the environment for (trial, episode) of one robot.
using EnvFactory = std::function<Environment(int trial, int episode)>;

struct TrialStats {
  int trial = 0;
  double episode_reward = 0.0;
  double yaw_rate_deg_s = 0.0;
  bool crashed = false;
  int steps = 0;
  std::size_t dataset_size = 0;  // after this trial's data was appended
};

inline TrialStats summarize(int trial, const TrialRecord& rec, std::size_t dataset_size) {
  return {trial, rec.summary.episode_reward, rec.summary.yaw_rate_deg_s, rec.summary.crashed,
          rec.summary.steps, dataset_size};
}

/// Data collection and model fitting for one robot. Every random draw is
/// keyed by (robot seed, purpose, trial), so runs are reproducible.
class Learner {
 public:
  Learner(EnvFactory factory, LoopConfig cfg, std::uint64_t seed)
      : factory_(std::move(factory)), cfg_(std::move(cfg)), seed_(seed) {}

  /// Trial 0: uniform-random actions, restarting after each crash until a
  /// full trial's worth of steps has been collected.
  TrialStats bootstrap() {
    Rng rng(derive_seed(seed_, kBootstrapStream));
    TrialRecord merged;
    int episode = 0;
    while (static_cast<int>(merged.log.size()) < cfg_.steps_per_trial) {
      Environment env = factory_(trial_, episode++);
      const int budget = cfg_.steps_per_trial - static_cast<int>(merged.log.size());
      TrialResult r = run_trial(env, nullptr, cfg_.mpc, cfg_.reward, rng, budget);
      data_.add(r.record);
      merged.log.insert(merged.log.end(), r.record.log.begin(), r.record.log.end());
      merged.summary.episode_reward += r.record.summary.episode_reward;
      merged.summary.crashed = merged.summary.crashed || r.record.summary.crashed;
      merged.summary.elapsed += r.record.summary.elapsed;
      merged.summary.yaw_rate_deg_s = r.record.summary.yaw_rate_deg_s;
    }
    merged.summary.steps = static_cast<int>(merged.log.size());
    return record(merged);
  }

  void retrain() {
    TrainConfig tc = cfg_.train;
    tc.seed = derive_seed(derive_seed(seed_, kTrainStream), static_cast<std::uint64_t>(trial_));
    TrainResult r = train(data_, tc);
    model_ = std::move(r.model);
    last_losses_ = std::move(r.epoch_losses);
  }

  /// Retrains on all data, then runs one MPC trial and appends its data.
  TrialResult mpc_trial() {
    retrain();
    Environment env = factory_(trial_, 0);
    Rng rng(derive_seed(derive_seed(seed_, kMpcStream), static_cast<std::uint64_t>(trial_)));
    TrialResult r = run_trial(env, &*model_, cfg_.mpc, cfg_.reward, rng, cfg_.steps_per_trial);
    data_.add(r.record);
    record(r.record);
    return r;
  }

  const Dataset& data() const { return data_; }
  const std::optional<DynamicsModel>& model() const { return model_; }
  const std::vector<TrialStats>& history() const { return history_; }
  const std::vector<double>& last_losses() const { return last_losses_; }
  int trials_run() const { return trial_; }

 private:
  static constexpr std::uint64_t kBootstrapStream = 1;
  static constexpr std::uint64_t kTrainStream = 2;
  static constexpr std::uint64_t kMpcStream = 3;

  TrialStats record(const TrialRecord& rec) {
    history_.push_back(summarize(trial_, rec, data_.size()));
    ++trial_;
    return history_.back();
  }

  EnvFactory factory_;
  LoopConfig cfg_;
  std::uint64_t seed_;
  Dataset data_;
  std::optional<DynamicsModel> model_;
  std::vector<TrialStats> history_;
  std::vector<double> last_losses_;
  int trial_ = 0;
};

struct RobotRun {
  std::vector<TrialStats> trials;
  DynamicsModel final_model;  // refit on every transition collected
  std::size_t dataset_size = 0;
};

/// Bootstrap plus (num_trials - 1) MPC trials, retraining before each.
inline RobotRun run_robot(const EnvFactory& factory, const LoopConfig& cfg, std::uint64_t seed) {
  require(cfg.num_trials >= 2, "the learning loop needs at least two trials");
  Learner learner(factory, cfg, seed);
  learner.bootstrap();
  for (int t = 1; t < cfg.num_trials; ++t) learner.mpc_trial();
  learner.retrain();
  return {learner.history(), *learner.model(), learner.data().size()};
}

/// Collects data (bootstrap, then MPC trials) until at least `seconds` of
/// flight has been logged, and returns the model refit on all of it.
inline Learner train_until(const EnvFactory& factory, const LoopConfig& cfg, std::uint64_t seed,
                           double seconds, double control_period = 0.01, int max_trials = 100) {
  Learner learner(factory, cfg, seed);
  learner.bootstrap();
  while (learner.data().seconds(control_period) < seconds && learner.trials_run() < max_trials) {
    learner.mpc_trial();
  }
  learner.retrain();
  return learner;
}

/// Linear-interpolated percentile (q in [0, 100]).
inline double percentile(std::vector<double> v, double q) {
  require(!v.empty(), "percentile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct CurvePoint {
  int trial = 0;
  double median = 0.0;
  double p65 = 0.0;
  double p95 = 0.0;
};

/// Per-trial median and 65th/95th percentiles of episode reward across robots.
inline std::vector<CurvePoint> aggregate_rewards(const std::vector<RobotRun>& runs) {
  std::vector<CurvePoint> out;
  if (runs.empty()) return out;
  const std::size_t trials = runs.front().trials.size();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> r;
    for (const RobotRun& run : runs)
      if (t < run.trials.size()) r.push_back(run.trials[t].episode_reward);
    out.push_back({static_cast<int>(t), percentile(r, 50), percentile(r, 65), percentile(r, 95)});
  }
  return out;
}

}  // namespace iono::mbrl

#pragma once

#include "iono/lie/policy.hpp"
#include "iono/mbrl/reward.hpp"
#include "iono/random.hpp"
#include "iono/sim/simulator.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace iono::mbrl {

enum class ActionMode { kContinuous, kDiscreteLie };

struct MpcConfig {
  int horizon = 5;
  int num_samples = 500;
  double action_low = 0.0;       // N
  double action_high = 0.3e-3;   // N
  ActionMode action_mode = ActionMode::kContinuous;
  lie::LieSequenceConfig lie_actions;  // discrete action set
  std::uint64_t seed = 0;

  void validate() const {
    require(horizon >= 1, "horizon must be at least 1");
    require(num_samples >= 1, "num_samples must be at least 1");
    require(action_low <= action_high, "action_low must not exceed action_high");
  }
};

/// Candidate action sequences: actions[t] is 4 x N, labels[t][i] is the
/// discrete action index (or -1 in continuous mode).
struct CandidateSet {
  std::vector<Eigen::MatrixXd> actions;
  std::vector<std::vector<int>> labels;
};

/// Draws N sequences. Candidate i uses its own substream of `key`, so the
/// set does not depend on evaluation order or worker count.
inline CandidateSet sample_candidates(const MpcConfig& cfg, std::uint64_t key) {
  CandidateSet set;
  const int n = cfg.num_samples;
  set.actions.assign(static_cast<std::size_t>(cfg.horizon), Eigen::MatrixXd(4, n));
  set.labels.assign(static_cast<std::size_t>(cfg.horizon), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(key, static_cast<std::uint64_t>(i)));
    for (int t = 0; t < cfg.horizon; ++t) {
      auto& a = set.actions[static_cast<std::size_t>(t)];
      if (cfg.action_mode == ActionMode::kContinuous) {
        for (int k = 0; k < 4; ++k) a(k, i) = rng.uniform(cfg.action_low, cfg.action_high);
      } else {
        const int label = static_cast<int>(rng.below(lie::kNumActions));
        set.labels[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = label;
        a.col(i) = cfg.lie_actions.actions[static_cast<std::size_t>(label)].f;
      }
    }
  }
  return set;
}

/// Sum of rewards along predicted horizons. `predictor` maps (12 x N states,
/// 4 x N actions) to 12 x N next states.
template <typename Predictor>
Eigen::VectorXd score_candidates(const Predictor& predictor, const State12& x,
                                 const CandidateSet& set, const RewardConfig& reward_cfg) {
  const Eigen::Index n = set.actions.front().cols();
  Eigen::MatrixXd states = x.v.replicate(1, n);
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(n);
  for (const Eigen::MatrixXd& a : set.actions) {
    states = predictor(states, a);
    for (Eigen::Index i = 0; i < n; ++i) {
      scores[i] += reward(states(kPsi, i), states(kTheta, i), states(kPhi, i), reward_cfg);
    }
  }
  return scores;
}

/// Index of the maximum score; ties go to the lowest index. NaN never wins.
inline Eigen::Index argmax_first(const Eigen::VectorXd& scores) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] || (std::isnan(scores[best]) && !std::isnan(scores[i]))) best = i;
  }
  return best;
}

struct MpcDecision {
  ThrusterCommand action;
  int candidate = 0;
  int label = -1;  // discrete action index, -1 in continuous mode
  double score = 0.0;
};

/// Random-shooting MPC: score N sampled sequences under `predictor` and
/// return the first action of the best one. Consumes one draw from `rng`.
template <typename Predictor>
MpcDecision mpc_select(const Predictor& predictor, const State12& x, const MpcConfig& cfg,
                       const RewardConfig& reward_cfg, Rng& rng) {
  cfg.validate();
  const CandidateSet set = sample_candidates(cfg, rng());
  const Eigen::VectorXd scores = score_candidates(predictor, x, set, reward_cfg);
  const Eigen::Index best = argmax_first(scores);
  MpcDecision d;
  d.candidate = static_cast<int>(best);
  d.action = ThrusterCommand(Vec4(set.actions.front().col(best)));
  d.label = set.labels.front()[static_cast<std::size_t>(best)];
  d.score = scores[best];
  return d;
}

/// Noise-free simulator as a batch predictor (one control period per call).
struct SimulatorPredictor {
  SimConfig sim;
  InertialConfig inertial;

  Eigen::MatrixXd operator()(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const {
    SimConfig quiet = sim;
    quiet.noise_sigma = 0.0;
    quiet.stop_angle = kPi / 2 - 1e-6;
    Rng unused(0);
    Eigen::MatrixXd out(states.rows(), states.cols());
    for (Eigen::Index i = 0; i < states.cols(); ++i) {
      const StepOutcome o = step_control_period(State12(Vec12(states.col(i))),
                                                ThrusterCommand(Vec4(actions.col(i))), quiet,
                                                inertial, unused);
      out.col(i) = o.next_state.v;
    }
    return out;
  }
};

}  // namespace iono::mbrl

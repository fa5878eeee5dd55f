#pragma once

#include "iono/mbrl/dataset.hpp"
#include "iono/mbrl/model.hpp"
#include "iono/mbrl/mpc.hpp"
#include "iono/sim/rollout.hpp"

#include <functional>
#include <optional>

namespace iono::mbrl {

inline constexpr int kStepsPerTrial = 1000;

struct TrialResult {
  TrialRecord record;
  std::vector<int> labels;  // chosen discrete action per step (-1 in continuous mode)
};

/// One episode. With a model the agent replans by MPC every control step;
/// without one it draws uniform-random actions from the MPC action set.
inline TrialResult run_trial(Environment& env, const DynamicsModel* model, const MpcConfig& mpc,
                             const RewardConfig& reward_cfg, Rng& rng,
                             int steps = kStepsPerTrial) {
  TrialResult res;
  const Policy policy = [&](double, const State12& x) {
    if (model != nullptr) {
      const MpcDecision d = mpc_select(*model, x, mpc, reward_cfg, rng);
      res.labels.push_back(d.label);
      return d.action;
    }
    if (mpc.action_mode == ActionMode::kDiscreteLie) {
      const int label = static_cast<int>(rng.below(lie::kNumActions));
      res.labels.push_back(label);
      return mpc.lie_actions.actions[static_cast<std::size_t>(label)];
    }
    res.labels.push_back(-1);
    ThrusterCommand u;
    for (int k = 0; k < 4; ++k) u.f[k] = rng.uniform(mpc.action_low, mpc.action_high);
    return u;
  };
  res.record = rollout(env, policy, steps, [&](const State12& s) { return reward(s, reward_cfg); });
  return res;
}

}  // namespace iono::mbrl

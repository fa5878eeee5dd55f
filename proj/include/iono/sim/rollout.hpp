#pragma once

#include "iono/sim/simulator.hpp"

#include <functional>
#include <iostream>
#include <vector>

namespace iono {

/// Maps (time since rollout start, current state) to a command.
using Policy = std::function<ThrusterCommand(double, const State12&)>;
using RewardFn = std::function<double(const State12&)>;

struct TrialStep {
  double t = 0.0;
  State12 x;
  ThrusterCommand u;
  State12 x_next;
  double reward = 0.0;
};

struct TrialSummary {
  double episode_reward = 0.0;
  double yaw_rate_deg_s = 0.0;  // (psi_end - psi_0) / elapsed
  bool crashed = false;
  int steps = 0;
  double elapsed = 0.0;
  double final_yaw = 0.0;
};

struct TrialRecord {
  std::vector<TrialStep> log;
  TrialSummary summary;
  int clamped_commands = 0;
};

/// Runs `policy` in `env` until the stop condition or `max_steps` control
/// periods. Out-of-range commands are clamped to [0, max_thrust].
inline TrialRecord rollout(Environment& env, const Policy& policy, int max_steps,
                           const RewardFn& reward = {}) {
  require(max_steps >= 1, "rollout needs at least one step");
  TrialRecord rec;
  rec.log.reserve(static_cast<std::size_t>(max_steps));
  const double psi0 = env.state().psi();
  const double t0 = env.time();
  const double fmax = env.sim().max_thrust;
  for (int k = 0; k < max_steps; ++k) {
    TrialStep s;
    s.t = env.time() - t0;
    s.x = env.state();
    s.u = policy(s.t, s.x);
    if (!s.u.within(0.0, fmax)) {
      s.u = s.u.clamped(0.0, fmax);
      ++rec.clamped_commands;
    }
    const StepOutcome out = env.step(s.u);
    s.x_next = out.next_state;
    if (reward) s.reward = reward(s.x_next);
    rec.summary.episode_reward += s.reward;
    rec.log.push_back(s);
    if (out.crashed) {
      rec.summary.crashed = true;
      break;
    }
  }
  if (rec.clamped_commands > 0) {
    std::clog << "warning: clamped " << rec.clamped_commands
              << " out-of-range thruster command(s) to [0, " << fmax << "] N\n";
  }
  rec.summary.steps = static_cast<int>(rec.log.size());
  rec.summary.elapsed = env.time() - t0;
  rec.summary.final_yaw = env.state().psi();
  if (rec.summary.elapsed > 0.0) {
    rec.summary.yaw_rate_deg_s = rad_to_deg(rec.summary.final_yaw - psi0) / rec.summary.elapsed;
  }
  return rec;
}

}  // namespace iono

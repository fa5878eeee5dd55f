#pragma once

#include "iono/lie/policy.hpp"
#include "iono/sim/rollout.hpp"

#include <vector>

namespace iono::lie {

struct SweepRow {
  double epsilon = 0.0;
  double yaw_rate_deg_s = 0.0;
  double stop_time_s = 0.0;
  bool crashed = false;
};

inline const std::vector<double>& default_sweep_epsilons() {
  static const std::vector<double> eps = {0.01, 0.02, 0.03, 0.04, 0.06, 0.08};
  return eps;
}

/// Open-loop Lie sequence from rest with noise removed, until the stop
/// condition or `cap_s` seconds. Yaw rate is psi(t_end) / t_end.
inline std::vector<SweepRow> lie_sweep(const std::vector<double>& epsilons, SimConfig sim,
                                       const InertialConfig& inertial, double cap_s = 10.0,
                                       LieSequenceConfig base = {}) {
  sim.noise_sigma = 0.0;
  base.control_period = sim.control_period;
  const int max_steps = static_cast<int>(std::lround(cap_s / sim.control_period));
  std::vector<SweepRow> rows;
  rows.reserve(epsilons.size());
  for (double eps : epsilons) {
    LieSequenceConfig cfg = base;
    cfg.epsilon = eps;
    cfg.validate();
    Environment env(sim, inertial);
    const TrialRecord rec =
        rollout(env, [&](double t, const State12&) { return lie_policy(t, cfg); }, max_steps);
    rows.push_back({eps, rec.summary.yaw_rate_deg_s, rec.summary.elapsed, rec.summary.crashed});
  }
  return rows;
}

}  // namespace iono::lie

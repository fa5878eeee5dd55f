#pragma once

#include "iono/sim/state.hpp"

namespace iono::mbrl {

enum class RewardMode { kSliding, kNaive };

struct RewardConfig {
  double eta = deg_to_rad(10.0);  // attitude window
  RewardMode mode = RewardMode::kSliding;
  double lambda = 1.0;            // naive mode only

  void validate(double stop_angle = deg_to_rad(45.0)) const {
    require(eta > 0.0 && eta < stop_angle, "eta must lie in (0, stop_angle)");
    require(lambda >= 0.0, "lambda must be non-negative");
  }
};

/// Yaw reward on Euler angles. Sliding mode pays |psi| strictly inside the
/// attitude window and -(theta^2 + phi^2) otherwise.
inline double reward(double psi, double theta, double phi, const RewardConfig& cfg) {
  const double tilt = theta * theta + phi * phi;
  if (cfg.mode == RewardMode::kNaive) return psi * psi - cfg.lambda * tilt;
  if (std::abs(phi) < cfg.eta && std::abs(theta) < cfg.eta) return std::abs(psi);
  return -tilt;
}

inline double reward(const State12& x, const RewardConfig& cfg) {
  return reward(x.psi(), x.theta(), x.phi(), cfg);
}

}  // namespace iono::mbrl

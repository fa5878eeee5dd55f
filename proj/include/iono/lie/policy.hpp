#pragma once

#include "iono/sim/state.hpp"

#include <array>
#include <cmath>
#include <string_view>

namespace iono::lie {

enum class Action : int { kPitchPlus = 0, kRollPlus, kPitchMinus, kRollMinus, kEquilibrium };

inline constexpr int kNumActions = 5;

inline constexpr std::array<std::string_view, kNumActions> kActionLabels = {
    "pitch+", "roll+", "pitch-", "roll-", "equil"};

inline std::string_view label(Action a) { return kActionLabels[static_cast<int>(a)]; }

/// Open-loop schedule: pitch+, roll+, pitch-, roll-, each held `epsilon`.
struct LieSequenceConfig {
  double epsilon = 0.01;
  double control_period = 0.01;
  std::array<ThrusterCommand, kNumActions> actions = {
      ThrusterCommand::from_millinewtons(0.15, 0.05, 0.05, 0.15),
      ThrusterCommand::from_millinewtons(0.15, 0.15, 0.05, 0.05),
      ThrusterCommand::from_millinewtons(0.05, 0.15, 0.15, 0.05),
      ThrusterCommand::from_millinewtons(0.05, 0.05, 0.15, 0.15),
      ThrusterCommand::from_millinewtons(0.1, 0.1, 0.1, 0.1),
  };

  const ThrusterCommand& action(Action a) const { return actions[static_cast<int>(a)]; }

  int ticks_per_phase() const {
    return static_cast<int>(std::lround(epsilon / control_period));
  }

  void validate() const {
    require(control_period > 0.0, "control period must be positive");
    const double ratio = epsilon / control_period;
    require(epsilon > 0.0 && std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1,
            "epsilon must be a positive integer multiple of the control period");
    const Vec4 twice_equil = 2.0 * action(Action::kEquilibrium).f;
    const auto mirrored = [&](Action p, Action m) {
      return (action(p).f + action(m).f - twice_equil).cwiseAbs().maxCoeff() < 1e-15;
    };
    require(mirrored(Action::kPitchPlus, Action::kPitchMinus) &&
                mirrored(Action::kRollPlus, Action::kRollMinus),
            "opposite Lie actions must mirror about the equilibrium action");
  }
};

/// Which action the schedule applies at time t.
inline Action lie_phase(double t, const LieSequenceConfig& cfg) {
  require(t >= 0.0, "time must be non-negative");
  const auto tick = static_cast<long long>(std::floor(t / cfg.control_period + 1e-9));
  const long long per_phase = cfg.ticks_per_phase();
  return static_cast<Action>((tick / per_phase) % 4);
}

inline ThrusterCommand lie_policy(double t, const LieSequenceConfig& cfg) {
  return cfg.action(lie_phase(t, cfg));
}

}  // namespace iono::lie

#pragma once

#include "iono/harness/config.hpp"
#include "iono/mbrl/loop.hpp"

#include <utility>

namespace iono::harness {

struct Randomization {
  double inertia_variation_frac = 0.15;
  double init_angle_range = deg_to_rad(22.5);  // rad

  static Randomization none() { return {0.0, 0.0}; }
};

/// Mass and principal inertias each scaled by an independent U(1-v, 1+v).
inline InertialConfig sample_inertia(const InertialConfig& base, double v, Rng& rng) {
  require(v >= 0.0 && v < 0.5, "inertia variation must lie in [0, 0.5)");
  InertialConfig out = base;
  if (v == 0.0) return out;
  out.mass *= rng.uniform(1.0 - v, 1.0 + v);
  out.ixx *= rng.uniform(1.0 - v, 1.0 + v);
  out.iyy *= rng.uniform(1.0 - v, 1.0 + v);
  out.izz *= rng.uniform(1.0 - v, 1.0 + v);
  return out;
}

/// Rest state with theta, phi ~ U(-range, range).
inline State12 sample_initial_state(double range, Rng& rng) {
  State12 x;
  if (range <= 0.0) return x;
  x.v[kTheta] = rng.uniform(-range, range);
  x.v[kPhi] = rng.uniform(-range, range);
  return x;
}

inline std::pair<InertialConfig, State12> randomize_env(const InertialConfig& base,
                                                       const Randomization& cfg, Rng& rng) {
  InertialConfig inertial = sample_inertia(base, cfg.inertia_variation_frac, rng);
  return {inertial, sample_initial_state(cfg.init_angle_range, rng)};
}

// Stream tags for the seed tree: master -> experiment -> robot -> trial.
enum class Stream : std::uint64_t {
  kLieSweep = 1,
  kAnalyze,
  kMbrlTrain,
  kMbrlEval,
  kMimic,
  kAcceptance,
};

inline std::uint64_t experiment_seed(std::uint64_t master, Stream s) {
  return derive_seed(master, static_cast<std::uint64_t>(s));
}

inline std::uint64_t robot_seed(std::uint64_t experiment, int robot, bool variation) {
  return derive_seed(derive_seed(experiment, variation ? 1 : 0), static_cast<std::uint64_t>(robot));
}

/// Environments for one robot. Inertia is drawn once per robot; initial
/// angles and sensor noise are drawn per (trial, episode).
class RobotEnvFactory {
 public:
  RobotEnvFactory(SimConfig sim, InertialConfig base, Randomization rnd, std::uint64_t seed)
      : sim_(sim), rnd_(rnd), seed_(seed) {
    Rng r(derive_seed(seed, kInertiaStream));
    inertial_ = sample_inertia(base, rnd.inertia_variation_frac, r);
  }

  Environment operator()(int trial, int episode) const {
    const std::uint64_t key =
        derive_seed(derive_seed(derive_seed(seed_, kTrialStream), static_cast<std::uint64_t>(trial)),
                    static_cast<std::uint64_t>(episode));
    Rng angles(derive_seed(key, kAngleStream));
    SimConfig s = sim_;
    s.seed = derive_seed(key, kNoiseStream);
    return Environment(s, inertial_, sample_initial_state(rnd_.init_angle_range, angles));
  }

  const InertialConfig& inertial() const { return inertial_; }

 private:
  static constexpr std::uint64_t kInertiaStream = 0;
  static constexpr std::uint64_t kTrialStream = 1;
  static constexpr std::uint64_t kAngleStream = 1;
  static constexpr std::uint64_t kNoiseStream = 2;

  SimConfig sim_;
  InertialConfig inertial_;
  Randomization rnd_;
  std::uint64_t seed_;
};

inline Randomization randomization_from(const ExperimentConfig& c) {
  return {c.randomization.inertia_variation_frac, deg_to_rad(c.randomization.init_angle_range_deg)};
}

}  // namespace iono::harness

#pragma once

#include "iono/random.hpp"
#include "iono/sim/dynamics.hpp"
#include "iono/sim/integrator.hpp"

#include <cmath>
#include <random>

namespace iono {

struct StepOutcome {
  State12 next_state;
  bool crashed = false;
  double elapsed = 0.0;  // seconds actually integrated in this period
};

inline bool attitude_exceeds(const State12& x, double stop_angle) {
  return std::abs(x.theta()) > stop_angle || std::abs(x.phi()) > stop_angle;
}

namespace detail {

inline void add_state_noise(State12& x, double sigma, Rng& rng) {
  if (sigma <= 0.0) return;
  std::normal_distribution<double> n(0.0, sigma);
  for (int i = 0; i < kStateDim; ++i) x[i] += n(rng);
}

inline State12 integrate_substep(const State12& x, const ThrusterCommand& u,
                                 const InertialConfig& inertial, const SimConfig& cfg) {
  auto f = [&](const Vec12& s) { return derivative(State12(s), u, inertial); };
  if (cfg.integrator == Integrator::kRk4) return State12(rk4_step(f, x.v, cfg.dt_dynamics));
  return State12(euler_step(f, x.v, cfg.dt_dynamics));
}

}  // namespace detail

/// Advances one control period with `u` held constant (zero-order hold).
///
/// The stop condition is checked on the incoming state and after every
/// dynamics substep; integration halts at the first violation. Noise is
/// drawn from `rng` only, so equal seeds give bit-identical outcomes.
inline StepOutcome step_control_period(const State12& x, const ThrusterCommand& u,
                                       const SimConfig& cfg, const InertialConfig& inertial,
                                       Rng& rng) {
  StepOutcome out;
  out.next_state = x;
  if (attitude_exceeds(x, cfg.stop_angle)) {
    out.crashed = true;
    return out;
  }
  const int n = cfg.substeps();
  for (int k = 0; k < n; ++k) {
    out.next_state = detail::integrate_substep(out.next_state, u, inertial, cfg);
    out.elapsed = (k + 1) * cfg.dt_dynamics;
    if (cfg.noise_injection == NoiseInjection::kPerSubstep) {
      detail::add_state_noise(out.next_state, cfg.noise_sigma, rng);
    }
    if (!out.next_state.finite()) throw DomainError("simulator state became non-finite");
    if (attitude_exceeds(out.next_state, cfg.stop_angle)) {
      out.crashed = true;
      return out;
    }
  }
  if (cfg.noise_injection == NoiseInjection::kPerControlPeriod) {
    detail::add_state_noise(out.next_state, cfg.noise_sigma, rng);
    out.crashed = attitude_exceeds(out.next_state, cfg.stop_angle);
  }
  return out;
}

/// A single simulated vehicle: configuration plus its own noise stream.
class Environment {
 public:
  Environment(SimConfig sim, InertialConfig inertial, State12 initial = {})
      : sim_(sim), inertial_(inertial), state_(initial), rng_(sim.seed) {
    sim_.validate();
    inertial_.validate();
  }

  StepOutcome step(const ThrusterCommand& u) {
    StepOutcome out = step_control_period(state_, u, sim_, inertial_, rng_);
    state_ = out.next_state;
    // Count substeps so long runs do not accumulate rounding in the clock.
    substeps_ += std::llround(out.elapsed / sim_.dt_dynamics);
    return out;
  }

  void reset(const State12& initial) {
    state_ = initial;
    substeps_ = 0;
  }

  const State12& state() const { return state_; }
  double time() const { return static_cast<double>(substeps_) * sim_.dt_dynamics; }
  const SimConfig& sim() const { return sim_; }
  const InertialConfig& inertial() const { return inertial_; }
  Rng& rng() { return rng_; }

 private:
  SimConfig sim_;
  InertialConfig inertial_;
  State12 state_;
  Rng rng_;
  long long substeps_ = 0;
};

}  // namespace iono

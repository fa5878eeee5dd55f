#pragma once

#include "iono/common.hpp"
#include "iono/sim/params.hpp"
#include "iono/sim/state.hpp"

namespace iono {

/// Ion-wind force of thruster `index` (1..4): F = beta_k * i * d / mu.
inline double thrust_from_current(double current, const ThrustParams& params, int index) {
  require(index >= 1 && index <= 4, "thruster index must be in 1..4");
  if (!(current >= 0.0)) throw DomainError("ion current must be non-negative");
  return params.beta[index - 1] * current * params.d / params.mu;
}

/// Inverse of thrust_from_current.
inline double current_for_thrust(double force, const ThrustParams& params, int index) {
  require(index >= 1 && index <= 4, "thruster index must be in 1..4");
  if (!(force >= 0.0)) throw DomainError("thrust must be non-negative");
  return force * params.mu / (params.beta[index - 1] * params.d);
}

struct Wrench {
  double fz = 0.0;
  Vec3 torque = Vec3::Zero();  // (tau_x, tau_y, tau_z), body frame
};

/// Point-force mixer. Thrusters sit at lever `arm` from the centre of mass
/// and produce no moment about the body z axis.
inline Wrench mix_forces(const ThrusterCommand& u, const InertialConfig& cfg) {
  const Vec4& f = u.f;
  const double l = cfg.arm;
  Wrench w;
  w.fz = f.sum();
  w.torque.x() = l * (-f[0] + f[1] + f[2] - f[3]);
  w.torque.y() = l * (-f[0] - f[1] + f[2] + f[3]);
  w.torque.z() = 0.0;
  return w;
}

}  // namespace iono

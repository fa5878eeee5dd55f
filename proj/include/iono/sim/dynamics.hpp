#pragma once

#include "iono/sim/kinematics.hpp"
#include "iono/sim/params.hpp"
#include "iono/sim/state.hpp"
#include "iono/sim/thrust.hpp"

namespace iono {

/// Time derivative of the 12-state rigid body under thruster forces `u`.
///
/// Translational dynamics live in the body frame; inertial gravity is
/// rotated into the body with Q^T so that F_i = mg/4 is a hover.
inline Vec12 derivative(const State12& x, const ThrusterCommand& u, const InertialConfig& cfg) {
  const Vec3 angles = x.angles();
  const Vec3 v = x.velocity();
  const Vec3 w = x.rates();
  const Mat3 q = body_to_inertial(angles);
  const Wrench wrench = mix_forces(u, cfg);

  const Vec3 gravity_body = q.transpose() * Vec3(0.0, 0.0, -cfg.gravity);
  const Vec3 force_body(0.0, 0.0, wrench.fz);
  const Vec3 inertia = cfg.inertia();

  Vec12 dx;
  dx.segment<3>(kX) = q * v;
  dx.segment<3>(kPsi) = euler_rates(angles, w);
  dx.segment<3>(kVx) = force_body / cfg.mass - w.cross(v) + gravity_body;
  dx.segment<3>(kWx) =
      (wrench.torque - w.cross(inertia.cwiseProduct(w))).cwiseQuotient(inertia);
  return dx;
}

}  // namespace iono

#pragma once

#include "iono/common.hpp"

namespace iono {

/// ZYX body-to-inertial rotation for (psi, theta, phi).
inline Mat3 body_to_inertial(double psi, double theta, double phi) {
  const double cps = std::cos(psi), sps = std::sin(psi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  const double cph = std::cos(phi), sph = std::sin(phi);
  Mat3 q;
  q << cth * cps, cps * sth * sph - cph * sps, sph * sps + cph * cps * sth,
       cth * sps, cph * cps + sth * sph * sps, cph * sth * sps - cps * sph,
       -sth,      cth * sph,                   cth * cph;
  return q;
}

inline Mat3 body_to_inertial(const Vec3& angles) {
  return body_to_inertial(angles[0], angles[1], angles[2]);
}

/// Inverse Wronskian mapping body rates to (psi_dot, theta_dot, phi_dot).
inline Mat3 inverse_wronskian(double theta, double phi) {
  const double cth = std::cos(theta);
  if (!(std::abs(theta) < kPi / 2) || cth <= 0.0) {
    throw SingularityError("Euler kinematics singular at |theta| >= pi/2");
  }
  const double sth = std::sin(theta);
  const double cph = std::cos(phi), sph = std::sin(phi);
  Mat3 w;
  w << 0.0, sph,        cph,
       0.0, cph * cth, -sph * cth,
       cth, sph * sth,  cph * sth;
  return w / cth;
}

inline Vec3 euler_rates(const Vec3& angles, const Vec3& omega) {
  return inverse_wronskian(angles[1], angles[2]) * omega;
}

}  // namespace iono

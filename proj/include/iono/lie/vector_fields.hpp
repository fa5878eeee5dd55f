#pragma once

#include "iono/common.hpp"

namespace iono::lie {

/// Attitude (psi, theta, phi) in radians, stored in that order.
struct AttitudeState {
  double psi = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  Vec3 vec() const { return {psi, theta, phi}; }
  static AttitudeState from(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

inline void check_regular(double theta) {
  if (!(std::abs(theta) < kPi / 2) || std::cos(theta) <= 0.0) {
    throw SingularityError("attitude vector fields singular at |theta| >= pi/2");
  }
}

/// Input vector fields of the Euler-rate system driven by (wx, wy, wz).
struct VectorFields {
  Vec3 f;  // wx
  Vec3 g;  // wy
  Vec3 h;  // wz
};

inline VectorFields vector_fields(const AttitudeState& x) {
  check_regular(x.theta);
  const double cth = std::cos(x.theta);
  const double sph = std::sin(x.phi), cph = std::cos(x.phi);
  return {Vec3(0.0, 0.0, 1.0),
          Vec3(sph / cth, cph, sph * std::tan(x.theta)),
          Vec3(cph / cth, -sph, cph)};
}

/// dg/dx, columns ordered (d/dpsi, d/dtheta, d/dphi).
inline Mat3 jacobian_g(const AttitudeState& x) {
  check_regular(x.theta);
  const double cth = std::cos(x.theta), sth = std::sin(x.theta);
  const double sph = std::sin(x.phi), cph = std::cos(x.phi);
  Mat3 j;
  j << 0.0, sph * sth / (cth * cth), cph / cth,
       0.0, 0.0,                     -sph,
       0.0, sph / (cth * cth),       cph * sth / cth;
  return j;
}

/// df/dx; f is constant.
inline Mat3 jacobian_f(const AttitudeState&) { return Mat3::Zero(); }

/// [f, g] = (dg/dx) f - (df/dx) g.
inline Vec3 lie_bracket_fg(const AttitudeState& x) {
  const VectorFields vf = vector_fields(x);
  return jacobian_g(x) * vf.f - jacobian_f(x) * vf.g;
}

}  // namespace iono::lie

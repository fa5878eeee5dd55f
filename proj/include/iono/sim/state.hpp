#pragma once

#include "iono/common.hpp"

#include <array>
#include <string_view>

namespace iono {

/// Index layout of the 12-dimensional rigid-body state.
enum StateIndex : int {
  kX = 0, kY, kZ,
  kPsi, kTheta, kPhi,
  kVx, kVy, kVz,
  kWx, kWy, kWz,
  kStateDim
};

inline constexpr std::array<std::string_view, kStateDim> kStateLabels = {
    "X", "Y", "Z", "psi", "theta", "phi", "vx", "vy", "vz", "wx", "wy", "wz"};

/// Position (inertial, m), ZYX Euler angles (rad), body-frame linear
/// velocity (m/s) and body rates (rad/s).
struct State12 {
  Vec12 v = Vec12::Zero();

  State12() = default;
  explicit State12(const Vec12& values) : v(values) {}

  double psi() const { return v[kPsi]; }
  double theta() const { return v[kTheta]; }
  double phi() const { return v[kPhi]; }

  Vec3 position() const { return v.segment<3>(kX); }
  Vec3 angles() const { return v.segment<3>(kPsi); }
  Vec3 velocity() const { return v.segment<3>(kVx); }
  Vec3 rates() const { return v.segment<3>(kWx); }

  bool finite() const { return v.allFinite(); }

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }

  bool operator==(const State12& o) const { return v == o.v; }
};

inline constexpr double kDefaultMaxThrust = 0.3e-3;  // N

/// Four thruster forces in newtons.
struct ThrusterCommand {
  Vec4 f = Vec4::Zero();

  ThrusterCommand() = default;
  explicit ThrusterCommand(const Vec4& forces) : f(forces) {}
  ThrusterCommand(double f1, double f2, double f3, double f4) : f(f1, f2, f3, f4) {}

  static ThrusterCommand from_millinewtons(double f1, double f2, double f3, double f4) {
    return {mn_to_n(f1), mn_to_n(f2), mn_to_n(f3), mn_to_n(f4)};
  }

  bool within(double lo, double hi) const {
    return (f.array() >= lo).all() && (f.array() <= hi).all();
  }

  ThrusterCommand clamped(double lo, double hi) const {
    return ThrusterCommand(f.cwiseMax(lo).cwiseMin(hi));
  }

  bool operator==(const ThrusterCommand& o) const { return f == o.f; }
};

}  // namespace iono

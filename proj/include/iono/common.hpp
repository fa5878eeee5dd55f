#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace iono {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat3 = Eigen::Matrix3d;

/// Raised when an argument violates a documented precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Euler kinematics evaluated at |theta| >= pi/2.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
constexpr double mn_to_n(double mn) { return mn / 1e3; }
constexpr double n_to_mn(double n) { return n * 1e3; }
/// g·mm² to kg·m².
constexpr double gmm2_to_kgm2(double v) { return v / 1e9; }
constexpr double mg_to_kg(double v) { return v / 1e6; }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

}  // namespace iono

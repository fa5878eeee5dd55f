#pragma once

#include "iono/common.hpp"

#include <array>
#include <cstdint>

namespace iono {

/// Electrohydrodynamic thrust constants.
struct ThrustParams {
  std::array<double, 4> beta{0.6, 0.6, 0.6, 0.6};
  double d = 500e-6;  // air gap, m
  double mu = 2e-4;   // ion mobility, m^2/(V s)

  void validate() const {
    for (double b : beta) require(b >= 0.3 && b <= 1.0, "thrust beta must lie in [0.3, 1.0]");
    require(d > 0.0, "air gap must be positive");
    require(mu > 0.0, "ion mobility must be positive");
  }
};

/// Rigid-body parameters, SI. Cross inertia terms are taken as zero.
struct InertialConfig {
  double mass = mg_to_kg(50.0);
  double ixx = gmm2_to_kgm2(1.984);
  double iyy = gmm2_to_kgm2(1.983);
  double izz = gmm2_to_kgm2(3.804);
  double arm = 0.01;
  double gravity = 9.81;

  void validate() const {
    require(mass > 0.0 && ixx > 0.0 && iyy > 0.0 && izz > 0.0 && arm > 0.0,
            "mass, inertia and arm length must be positive");
    require(std::isfinite(gravity), "gravity must be finite");
  }

  Vec3 inertia() const { return {ixx, iyy, izz}; }
};

/// Assembly variants with measured inertia (g·mm², converted on construction).
struct AssemblyVariant {
  const char* name;
  double mass_mg;
  double ixx_gmm2;
  double iyy_gmm2;
  double izz_gmm2;

  InertialConfig to_inertial(double arm = 0.01, double gravity = 9.81) const {
    return {mg_to_kg(mass_mg), gmm2_to_kgm2(ixx_gmm2), gmm2_to_kgm2(iyy_gmm2),
            gmm2_to_kgm2(izz_gmm2), arm, gravity};
  }
};

inline constexpr std::array<AssemblyVariant, 3> kAssemblyVariants = {{
    {"no_imu", 26.0, 1.967, 1.967, 3.775},
    {"imu_center", 46.0, 1.984, 1.983, 3.804},
    {"imu_5mm_x_error", 46.0, 2.262, 1.983, 4.083},
}};

enum class Integrator { kEuler, kRk4 };

enum class NoiseInjection { kPerControlPeriod, kPerSubstep };

struct SimConfig {
  double dt_dynamics = 1e-3;
  double control_period = 1e-2;
  double noise_sigma = 0.01;
  double stop_angle = deg_to_rad(45.0);
  Integrator integrator = Integrator::kEuler;
  NoiseInjection noise_injection = NoiseInjection::kPerControlPeriod;
  double max_thrust = 0.3e-3;  // N, clamp bound for rollouts
  std::uint64_t seed = 0;

  int substeps() const { return static_cast<int>(std::lround(control_period / dt_dynamics)); }

  void validate() const {
    require(dt_dynamics > 0.0 && control_period > 0.0, "time steps must be positive");
    const double ratio = control_period / dt_dynamics;
    require(std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0,
            "control_period must be an integer multiple of dt_dynamics");
    require(noise_sigma >= 0.0, "noise_sigma must be non-negative");
    require(stop_angle > 0.0 && stop_angle < kPi / 2, "stop_angle must lie in (0, pi/2)");
    require(max_thrust > 0.0, "max_thrust must be positive");
  }
};

}  // namespace iono

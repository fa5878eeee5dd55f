#pragma once

#include "iono/lie/vector_fields.hpp"
#include "iono/sim/integrator.hpp"

#include <array>

namespace iono::lie {

enum class Field { kF, kG };

struct Phase {
  Field field;
  double sign;  // +1 or -1, the constant input on `field`
};

using PhaseSequence = std::array<Phase, 4>;

/// +f, +g, -f, -g: nets eps^2 [f, g].
inline constexpr PhaseSequence kForwardSequence = {
    {{Field::kF, 1.0}, {Field::kG, 1.0}, {Field::kF, -1.0}, {Field::kG, -1.0}}};
/// -f, +g, +f, -g: nets eps^2 [-f, g] = -eps^2 [f, g].
inline constexpr PhaseSequence kReversedSequence = {
    {{Field::kF, -1.0}, {Field::kG, 1.0}, {Field::kF, 1.0}, {Field::kG, -1.0}}};

/// State after driving x' = f v1 + g v2 through `seq`, each phase held for
/// `epsilon` with unit rate inputs, using `substeps` RK4 steps per phase.
inline Vec3 flow_endpoint(const AttitudeState& x0, double epsilon, int substeps,
                          const PhaseSequence& seq = kForwardSequence) {
  require(epsilon > 0.0, "epsilon must be positive");
  require(substeps >= 10, "flow composition needs at least 10 substeps per phase");
  Vec3 x = x0.vec();
  const double h = epsilon / substeps;
  for (const Phase& p : seq) {
    auto rhs = [&](const Vec3& s) -> Vec3 {
      const VectorFields vf = vector_fields(AttitudeState::from(s));
      return p.sign * (p.field == Field::kF ? vf.f : vf.g);
    };
    for (int k = 0; k < substeps; ++k) x = rk4_step(rhs, x, h);
  }
  return x;
}

/// Finite-time estimate (x(4 eps) - x0) / eps^2 of the bracket direction.
inline Vec3 flow_composition(const AttitudeState& x0, double epsilon, int substeps = 100,
                             const PhaseSequence& seq = kForwardSequence) {
  return (flow_endpoint(x0, epsilon, substeps, seq) - x0.vec()) / (epsilon * epsilon);
}

/// || x(4 eps) - x0 - eps^2 [f, g](x0) ||, the part not explained by the bracket.
inline double flow_remainder(const AttitudeState& x0, double epsilon, int substeps = 100) {
  const Vec3 end = flow_endpoint(x0, epsilon, substeps);
  return (end - x0.vec() - epsilon * epsilon * lie_bracket_fg(x0)).norm();
}

}  // namespace iono::lie

#pragma once

namespace iono {

template <typename Vec, typename Deriv>
Vec euler_step(Deriv&& f, const Vec& x, double h) {
  return x + h * f(x);
}

/// Classic fourth-order Runge-Kutta step.
template <typename Vec, typename Deriv>
Vec rk4_step(Deriv&& f, const Vec& x, double h) {
  const Vec k1 = f(x);
  const Vec k2 = f(Vec(x + 0.5 * h * k1));
  const Vec k3 = f(Vec(x + 0.5 * h * k2));
  const Vec k4 = f(Vec(x + h * k3));
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace iono

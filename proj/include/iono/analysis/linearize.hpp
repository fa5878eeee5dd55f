#pragma once

#include "iono/sim/dynamics.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace iono::analysis {

struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  std::vector<std::string> state_labels;
  std::vector<std::string> input_labels;
  /// ||f(x*, u*)||_inf; zero at a true equilibrium.
  double equilibrium_residual = 0.0;

  int n() const { return static_cast<int>(a.rows()); }
  int m() const { return static_cast<int>(b.cols()); }

  void validate() const {
    require(a.rows() == a.cols(), "A must be square");
    require(b.rows() == a.rows(), "B must have as many rows as A");
    require(state_labels.empty() || static_cast<int>(state_labels.size()) == n(),
            "one label per state");
    require(input_labels.empty() || static_cast<int>(input_labels.size()) == m(),
            "one label per input");
  }

  /// Restriction to the listed states, keeping only the listed input columns.
  LinearSystem subsystem(const std::vector<int>& states, const Eigen::MatrixXd& b_sub,
                         std::vector<std::string> inputs) const {
    LinearSystem s;
    const auto k = static_cast<Eigen::Index>(states.size());
    s.a.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) s.a(i, j) = a(states[i], states[j]);
    s.b = b_sub;
    for (int i : states) s.state_labels.push_back(state_labels.empty() ? "" : state_labels[i]);
    s.input_labels = std::move(inputs);
    s.equilibrium_residual = equilibrium_residual;
    return s;
  }
};

struct LinearizeSteps {
  double state = 1e-6;
  double input = 1e-9;  // N
};

/// Central-difference Jacobians of `derivative` about (x*, u*).
inline LinearSystem linearize(const State12& x_star, const ThrusterCommand& u_star,
                              const InertialConfig& cfg, LinearizeSteps h = {}) {
  LinearSystem sys;
  sys.a.resize(kStateDim, kStateDim);
  sys.b.resize(kStateDim, 4);
  for (int j = 0; j < kStateDim; ++j) {
    State12 plus = x_star, minus = x_star;
    plus[j] += h.state;
    minus[j] -= h.state;
    sys.a.col(j) = (derivative(plus, u_star, cfg) - derivative(minus, u_star, cfg)) / (2 * h.state);
  }
  for (int j = 0; j < 4; ++j) {
    ThrusterCommand plus = u_star, minus = u_star;
    plus.f[j] += h.input;
    minus.f[j] -= h.input;
    sys.b.col(j) = (derivative(x_star, plus, cfg) - derivative(x_star, minus, cfg)) / (2 * h.input);
  }
  for (auto l : kStateLabels) sys.state_labels.emplace_back(l);
  sys.input_labels = {"F1", "F2", "F3", "F4"};
  sys.equilibrium_residual = derivative(x_star, u_star, cfg).cwiseAbs().maxCoeff();
  return sys;
}

/// Per-thruster force giving total thrust m g.
inline ThrusterCommand hover_command(const InertialConfig& cfg) {
  const double f = cfg.mass * cfg.gravity / 4.0;
  return {f, f, f, f};
}

/// Attitude block (psi, theta, phi, wx, wy, wz) driven directly by
/// (tau_x, tau_y).
inline LinearSystem attitude_subsystem(const LinearSystem& full, const InertialConfig& cfg) {
  const std::vector<int> idx = {kPsi, kTheta, kPhi, kWx, kWy, kWz};
  // d(omega_dot)/d(tau) = I^-1 restricted to the two actuated axes.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(6, 2);
  b(3, 0) = 1.0 / cfg.ixx;
  b(4, 1) = 1.0 / cfg.iyy;
  return full.subsystem(idx, b, {"tau_x", "tau_y"});
}

}  // namespace iono::analysis

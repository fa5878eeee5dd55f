#pragma once

#include "iono/analysis/linearize.hpp"

#include <Eigen/SVD>
#include <json.hpp>

namespace iono::analysis {

/// [B, AB, ..., A^(n-1) B].
inline Eigen::MatrixXd controllability_matrix(const LinearSystem& sys) {
  sys.validate();
  const Eigen::Index n = sys.a.rows(), m = sys.b.cols();
  Eigen::MatrixXd c(n, n * m);
  Eigen::MatrixXd block = sys.b;
  for (Eigen::Index k = 0; k < n; ++k) {
    c.middleCols(k * m, m) = block;
    block = sys.a * block;
  }
  return c;
}

struct ControllabilityReport {
  int rank = 0;
  int n = 0;
  std::vector<Eigen::VectorXd> uncontrollable_basis;  // orthonormal
  Eigen::VectorXd singular_values;
  std::vector<std::string> state_labels;
  double equilibrium_residual = 0.0;

  /// Norm of the projection of `v` onto the controllable subspace.
  double controllable_projection(const Eigen::VectorXd& v) const {
    Eigen::VectorXd rest = v;
    for (const auto& u : uncontrollable_basis) rest -= u.dot(v) * u;
    return rest.norm();
  }

  double controllable_projection(int state) const {
    return controllable_projection(Eigen::VectorXd::Unit(n, state));
  }
};

/// Rank by relative singular-value threshold; the uncontrollable basis is
/// the left null space of the controllability matrix.
inline ControllabilityReport analyze_yaw(const LinearSystem& sys, double tolerance = 1e-8) {
  require(tolerance > 0.0, "rank tolerance must be positive");
  const Eigen::MatrixXd c = controllability_matrix(sys);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullU);
  const Eigen::VectorXd& s = svd.singularValues();
  ControllabilityReport rep;
  rep.n = sys.n();
  rep.singular_values = s;
  rep.state_labels = sys.state_labels;
  rep.equilibrium_residual = sys.equilibrium_residual;
  const double smax = s.size() > 0 ? s[0] : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0.0 && s[i] > tolerance * smax) ++rep.rank;
  for (int i = rep.rank; i < rep.n; ++i) rep.uncontrollable_basis.push_back(svd.matrixU().col(i));
  return rep;
}

inline nlohmann::json to_json(const ControllabilityReport& r) {
  nlohmann::json j;
  j["rank"] = r.rank;
  j["n"] = r.n;
  j["equilibrium_residual"] = r.equilibrium_residual;
  j["singular_values"] = std::vector<double>(r.singular_values.data(),
                                             r.singular_values.data() + r.singular_values.size());
  auto dirs = nlohmann::json::array();
  for (const auto& u : r.uncontrollable_basis) {
    nlohmann::json d = nlohmann::json::object();
    for (int i = 0; i < r.n; ++i) {
      const std::string key = r.state_labels.empty() ? std::to_string(i) : r.state_labels[i];
      // Round away sub-1e-12 noise so the document is stable across runs.
      d[key] = std::abs(u[i]) < 1e-12 ? 0.0 : u[i];
    }
    dirs.push_back(d);
  }
  j["uncontrollable_directions"] = dirs;
  auto proj = nlohmann::json::object();
  for (int i = 0; i < r.n; ++i) {
    const std::string key = r.state_labels.empty() ? std::to_string(i) : r.state_labels[i];
    proj[key] = r.controllable_projection(i);
  }
  j["controllable_projection"] = proj;
  return j;
}

inline nlohmann::json to_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) r[static_cast<std::size_t>(k)] = m(i, k);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace iono::analysis

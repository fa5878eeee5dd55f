#pragma once

#include "iono/sim/rollout.hpp"

#include <Eigen/Core>

#include <vector>

namespace iono::mbrl {

inline constexpr int kActionDim = 4;
inline constexpr double kStdFloor = 1e-8;

/// Which state coordinates feed the network and which it predicts deltas
/// for. Coordinates outside `outputs` are carried over unchanged.
struct FeatureMap {
  std::vector<int> inputs;
  std::vector<int> outputs;

  static FeatureMap full() {
    FeatureMap m;
    for (int i = 0; i < kStateDim; ++i) {
      m.inputs.push_back(i);
      m.outputs.push_back(i);
    }
    return m;
  }

  /// Tilt and body rates in; Euler angles and rates out. Position, velocity
  /// and yaw never enter the attitude dynamics, and they grow without bound
  /// over an episode.
  static FeatureMap attitude() {
    return {{kTheta, kPhi, kWx, kWy, kWz}, {kPsi, kTheta, kPhi, kWx, kWy, kWz}};
  }

  int input_dim() const { return static_cast<int>(inputs.size()) + kActionDim; }
  int output_dim() const { return static_cast<int>(outputs.size()); }

  void validate() const {
    require(!outputs.empty(), "feature map needs at least one output");
    for (int i : inputs) require(i >= 0 && i < kStateDim, "feature index out of range");
    for (int i : outputs) require(i >= 0 && i < kStateDim, "feature index out of range");
  }

  bool operator==(const FeatureMap&) const = default;
};

struct Transition {
  State12 x;
  ThrusterCommand u;
  State12 x_next;
  double reward = 0.0;

  bool finite() const {
    return x.finite() && u.f.allFinite() && x_next.finite() && std::isfinite(reward);
  }
};

/// Per-dimension statistics of network inputs [x; u] and targets x' - x.
struct Normalization {
  Eigen::VectorXd in_mean;
  Eigen::VectorXd in_std;
  Eigen::VectorXd out_mean;
  Eigen::VectorXd out_std;
};

/// Network input columns [x_sel; u] for a batch of states and actions.
inline Eigen::MatrixXd model_inputs(const FeatureMap& map, const Eigen::MatrixXd& states,
                                    const Eigen::MatrixXd& actions) {
  const auto k = static_cast<Eigen::Index>(map.inputs.size());
  Eigen::MatrixXd in(k + kActionDim, states.cols());
  for (Eigen::Index r = 0; r < k; ++r) in.row(r) = states.row(map.inputs[static_cast<std::size_t>(r)]);
  in.bottomRows(kActionDim) = actions;
  return in;
}

class Dataset {
 public:
  void add(const Transition& t) {
    require(t.finite(), "transitions must be finite");
    transitions_.push_back(t);
  }

  void add(const TrialRecord& rec) {
    for (const TrialStep& s : rec.log) add({s.x, s.u, s.x_next, s.reward});
  }

  std::size_t size() const { return transitions_.size(); }
  bool empty() const { return transitions_.empty(); }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& operator[](std::size_t i) const { return transitions_[i]; }

  Eigen::MatrixXd states() const {
    Eigen::MatrixXd m(kStateDim, static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) m.col(static_cast<Eigen::Index>(i)) = transitions_[i].x.v;
    return m;
  }

  Eigen::MatrixXd actions() const {
    Eigen::MatrixXd m(kActionDim, static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) m.col(static_cast<Eigen::Index>(i)) = transitions_[i].u.f;
    return m;
  }

  /// Network inputs, one column per transition.
  Eigen::MatrixXd inputs(const FeatureMap& map) const { return model_inputs(map, states(), actions()); }

  /// Deltas x' - x of the mapped outputs, one column per transition.
  Eigen::MatrixXd targets(const FeatureMap& map) const {
    Eigen::MatrixXd m(map.output_dim(), static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      for (int r = 0; r < map.output_dim(); ++r) {
        const int s = map.outputs[static_cast<std::size_t>(r)];
        m(r, static_cast<Eigen::Index>(i)) = transitions_[i].x_next[s] - transitions_[i].x[s];
      }
    }
    return m;
  }

  /// Mean and (population) standard deviation, std floored at 1e-8.
  Normalization normalization(const FeatureMap& map) const {
    require(!empty(), "normalization of an empty dataset");
    Normalization n;
    auto stats = [](const Eigen::MatrixXd& m, Eigen::VectorXd& mean, Eigen::VectorXd& sd) {
      mean = m.rowwise().mean();
      sd = ((m.colwise() - mean).array().square().rowwise().mean()).sqrt().matrix();
      sd = sd.cwiseMax(kStdFloor);
    };
    stats(inputs(map), n.in_mean, n.in_std);
    stats(targets(map), n.out_mean, n.out_std);
    return n;
  }

  /// Seconds of flight represented at the given control period.
  double seconds(double control_period = 0.01) const {
    return static_cast<double>(size()) * control_period;
  }

 private:
  std::vector<Transition> transitions_;
};

}  // namespace iono::mbrl

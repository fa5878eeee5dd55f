#pragma once

#include "iono/mbrl/dataset.hpp"
#include "iono/mbrl/mlp.hpp"

#include <json.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace iono::mbrl {

inline constexpr int kModelFormatVersion = 1;

struct TrainConfig {
  int epochs = 17;
  double lr = 0.0025;
  int batch = 18;
  int hidden = 250;
  FeatureMap features = FeatureMap::attitude();
  std::uint64_t seed = 0;
};

/// Learned one-step delta model: x' = x + denormalize(net(normalize([x; u]))).
class DynamicsModel {
 public:
  using Net = Mlp<float>;

  DynamicsModel() = default;
  DynamicsModel(Net net, Normalization norm, FeatureMap features, std::uint64_t seed)
      : net_(std::move(net)), norm_(std::move(norm)), features_(std::move(features)), seed_(seed) {
    features_.validate();
    require(net_.dims().front() == features_.input_dim() &&
                net_.dims().back() == features_.output_dim(),
            "network shape does not match the feature map");
    require(norm_.in_mean.size() == features_.input_dim() &&
                norm_.in_std.size() == features_.input_dim() &&
                norm_.out_mean.size() == features_.output_dim() &&
                norm_.out_std.size() == features_.output_dim(),
            "normalization shape does not match the feature map");
  }

  bool trained() const { return net_.num_layers() > 0; }
  const Net& net() const { return net_; }
  const Normalization& normalization() const { return norm_; }
  const FeatureMap& features() const { return features_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& activation() const { return activation_; }

  /// Batched prediction; one state/action per column.
  Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const {
    check_ready();
    require(states.rows() == kStateDim && actions.rows() == kActionDim &&
                states.cols() == actions.cols(),
            "predict_batch: shape mismatch");
    thread_local Net::Workspace ws;
    thread_local Net::Matrix in;
    in = ((model_inputs(features_, states, actions).colwise() - norm_.in_mean).array().colwise() /
          norm_.in_std.array())
             .cast<float>()
             .matrix();
    const Net::Matrix& out = net_.forward(in, ws);
    Eigen::MatrixXd next = states;
    for (int r = 0; r < features_.output_dim(); ++r) {
      const double sd = norm_.out_std[r], mean = norm_.out_mean[r];
      next.row(features_.outputs[static_cast<std::size_t>(r)]).array() +=
          out.row(r).cast<double>().array() * sd + mean;
    }
    return next;
  }

  /// Callable form used by the planner.
  Eigen::MatrixXd operator()(const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions) const {
    return predict_batch(states, actions);
  }

 private:
  void check_ready() const {
    if (!trained()) throw DomainError("dynamics model has not been trained");
    if (!net_.finite()) throw DomainError("dynamics model has non-finite weights");
  }

  Net net_;
  Normalization norm_;
  FeatureMap features_;
  std::uint64_t seed_ = 0;
  std::string activation_ = "relu";
};

inline State12 predict(const DynamicsModel& model, const State12& x, const ThrusterCommand& u) {
  const Eigen::MatrixXd next = model.predict_batch(x.v, u.f);
  State12 out(next.col(0));
  if (!out.finite()) throw DomainError("prediction is not finite");
  return out;
}

/// Recursive multi-step prediction; element k is the state after actions[0..k].
template <typename Model>
std::vector<State12> rollout_predict(const Model& model, const State12& x0,
                                     const std::vector<ThrusterCommand>& actions) {
  require(!actions.empty(), "action sequence must be non-empty");
  std::vector<State12> out;
  out.reserve(actions.size());
  State12 x = x0;
  for (const ThrusterCommand& u : actions) {
    x = predict(model, x, u);
    out.push_back(x);
  }
  return out;
}

struct TrainResult {
  DynamicsModel model;
  std::vector<double> epoch_losses;  // mean normalized MSE over each epoch's batches
};

/// Fits a delta model by minibatch Adam on normalized MSE. Statistics are
/// recomputed from `data` on every call; data order is reshuffled per epoch.
inline TrainResult train(const Dataset& data, const TrainConfig& cfg) {
  require(cfg.batch >= 1 && cfg.epochs >= 1 && cfg.hidden >= 1 && cfg.lr > 0.0,
          "invalid training hyperparameters");
  if (data.size() < static_cast<std::size_t>(cfg.batch)) {
    throw DomainError("dataset has fewer transitions than one batch");
  }
  const FeatureMap& fm = cfg.features;
  fm.validate();
  const Normalization norm = data.normalization(fm);
  const Eigen::MatrixXf in =
      ((data.inputs(fm).colwise() - norm.in_mean).array().colwise() / norm.in_std.array())
          .matrix()
          .cast<float>();
  const Eigen::MatrixXf target =
      ((data.targets(fm).colwise() - norm.out_mean).array().colwise() / norm.out_std.array())
          .matrix()
          .cast<float>();

  Rng rng(cfg.seed);
  Rng init_rng = rng.split(0);
  Rng shuffle_rng = rng.split(1);
  Mlp<float> net({fm.input_dim(), cfg.hidden, cfg.hidden, fm.output_dim()}, init_rng);
  Adam<float> adam(net, {cfg.lr, 0.9, 0.999, 1e-8});

  const auto n = static_cast<Eigen::Index>(data.size());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  TrainResult result;
  Mlp<float>::Gradients grad;
  Eigen::MatrixXf bx, by;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }
    double total = 0.0;
    int batches = 0;
    for (Eigen::Index start = 0; start < n; start += cfg.batch) {
      const Eigen::Index len = std::min<Eigen::Index>(cfg.batch, n - start);
      bx.resize(in.rows(), len);
      by.resize(target.rows(), len);
      for (Eigen::Index k = 0; k < len; ++k) {
        bx.col(k) = in.col(order[static_cast<std::size_t>(start + k)]);
        by.col(k) = target.col(order[static_cast<std::size_t>(start + k)]);
      }
      total += net.loss_and_gradient(bx, by, grad);
      ++batches;
      adam.step(net, grad);
    }
    result.epoch_losses.push_back(total / batches);
  }
  result.model = DynamicsModel(std::move(net), norm, fm, cfg.seed);
  return result;
}

/// Normalized one-step MSE of `model` on `data` over the modelled outputs.
inline double normalized_mse(const DynamicsModel& model, const Dataset& data) {
  const FeatureMap& fm = model.features();
  const Eigen::MatrixXd states = data.states();
  const Eigen::MatrixXd next = model.predict_batch(states, data.actions());
  const Eigen::MatrixXd targets = data.targets(fm);
  const Normalization& nm = model.normalization();
  double sum = 0.0;
  for (int r = 0; r < fm.output_dim(); ++r) {
    const int s = fm.outputs[static_cast<std::size_t>(r)];
    const Eigen::ArrayXd pred = (next.row(s) - states.row(s)).transpose().array();
    sum += ((pred - targets.row(r).transpose().array()) / nm.out_std[r]).square().sum();
  }
  return sum / static_cast<double>(targets.size());
}

// Serialization. Weights are stored row-major per layer as float values
// widened to double, which round-trips exactly.

inline nlohmann::json to_json(const DynamicsModel& m) {
  using nlohmann::json;
  const auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  json j;
  j["format_version"] = kModelFormatVersion;
  j["layer_dims"] = m.net().dims();
  j["activation"] = m.activation();
  json weights = json::array(), biases = json::array();
  for (std::size_t l = 0; l < m.net().num_layers(); ++l) {
    const auto& w = m.net().weights()[l];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(static_cast<double>(w(r, c)));
    weights.push_back(flat);
    const auto& b = m.net().biases()[l];
    biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  j["weights"] = weights;
  j["biases"] = biases;
  const Normalization& n = m.normalization();
  j["normalization"] = {{"in_mean", vec(n.in_mean)},
                        {"in_std", vec(n.in_std)},
                        {"out_mean", vec(n.out_mean)},
                        {"out_std", vec(n.out_std)}};
  j["feature_inputs"] = m.features().inputs;
  j["feature_outputs"] = m.features().outputs;
  j["seed"] = m.seed();
  return j;
}

inline DynamicsModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kModelFormatVersion) {
      throw ConfigError("unsupported model format_version");
    }
    if (j.at("activation").get<std::string>() != "relu") {
      throw ConfigError("unsupported activation");
    }
    const auto dims = j.at("layer_dims").get<std::vector<int>>();
    std::vector<Mlp<float>::Matrix> weights;
    std::vector<Mlp<float>::Vector> biases;
    const auto& jw = j.at("weights");
    const auto& jb = j.at("biases");
    if (dims.size() < 2 || jw.size() + 1 != dims.size() || jb.size() + 1 != dims.size()) {
      throw ConfigError("model layer count mismatch");
    }
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      const auto flat = jw[l].get<std::vector<double>>();
      const auto bias = jb[l].get<std::vector<double>>();
      if (flat.size() != static_cast<std::size_t>(dims[l + 1]) * static_cast<std::size_t>(dims[l]) ||
          bias.size() != static_cast<std::size_t>(dims[l + 1])) {
        throw ConfigError("model layer shape mismatch");
      }
      Mlp<float>::Matrix w(dims[l + 1], dims[l]);
      std::size_t k = 0;
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = static_cast<float>(flat[k++]);
      Mlp<float>::Vector b(dims[l + 1]);
      for (std::size_t i = 0; i < bias.size(); ++i) b[static_cast<Eigen::Index>(i)] = static_cast<float>(bias[i]);
      weights.push_back(std::move(w));
      biases.push_back(std::move(b));
    }
    const auto& jn = j.at("normalization");
    const auto load = [&](const char* key, int dim) {
      const auto v = jn.at(key).get<std::vector<double>>();
      if (static_cast<int>(v.size()) != dim) throw ConfigError(std::string("bad normalization ") + key);
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), dim));
    };
    FeatureMap fm{j.at("feature_inputs").get<std::vector<int>>(),
                  j.at("feature_outputs").get<std::vector<int>>()};
    try {
      fm.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    if (dims.front() != fm.input_dim() || dims.back() != fm.output_dim()) {
      throw ConfigError("model layer dimensions do not match its feature map");
    }
    Normalization n;
    n.in_mean = load("in_mean", fm.input_dim());
    n.in_std = load("in_std", fm.input_dim());
    n.out_mean = load("out_mean", fm.output_dim());
    n.out_std = load("out_std", fm.output_dim());
    return DynamicsModel(Mlp<float>(dims, std::move(weights), std::move(biases)), std::move(n),
                         std::move(fm), j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace iono::mbrl

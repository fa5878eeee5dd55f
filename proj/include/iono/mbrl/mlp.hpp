#pragma once

#include "iono/common.hpp"
#include "iono/random.hpp"

#include <Eigen/Core>

#include <cmath>
#include <vector>

namespace iono::mbrl {

/// Fully connected network with ReLU hidden layers and a linear output.
/// Batches are column-major: one sample per column.
template <typename Scalar>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
  };

  Mlp() = default;

  /// Uniform fan-in initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  Mlp(std::vector<int> dims, Rng& rng) : dims_(std::move(dims)) {
    require(dims_.size() >= 2, "network needs at least input and output layers");
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      require(dims_[l] > 0 && dims_[l + 1] > 0, "layer widths must be positive");
      const double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
      Matrix w(dims_[l + 1], dims_[l]);
      Vector b(dims_[l + 1]);
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = Scalar(rng.uniform(-bound, bound));
      for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = Scalar(rng.uniform(-bound, bound));
      weights_.push_back(std::move(w));
      biases_.push_back(std::move(b));
    }
  }

  Mlp(std::vector<int> dims, std::vector<Matrix> weights, std::vector<Vector> biases)
      : dims_(std::move(dims)), weights_(std::move(weights)), biases_(std::move(biases)) {
    require(weights_.size() + 1 == dims_.size() && biases_.size() == weights_.size(),
            "layer count mismatch");
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      require(weights_[l].rows() == dims_[l + 1] && weights_[l].cols() == dims_[l] &&
                  biases_[l].size() == dims_[l + 1],
              "layer shape mismatch");
    }
  }

  const std::vector<int>& dims() const { return dims_; }
  std::size_t num_layers() const { return weights_.size(); }
  const std::vector<Matrix>& weights() const { return weights_; }
  const std::vector<Vector>& biases() const { return biases_; }
  std::vector<Matrix>& weights() { return weights_; }
  std::vector<Vector>& biases() { return biases_; }

  std::size_t num_parameters() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
      n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
    return n;
  }

  bool finite() const {
    for (std::size_t l = 0; l < weights_.size(); ++l)
      if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
    return true;
  }

  /// Reusable activation buffers for forward passes of a fixed batch size.
  struct Workspace {
    std::vector<Matrix> layers;
  };

  const Matrix& forward(const Matrix& in, Workspace& ws) const {
    ws.layers.resize(weights_.size());
    const Matrix* a = &in;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Matrix& z = ws.layers[l];
      z.noalias() = weights_[l] * (*a);
      z.colwise() += biases_[l];
      if (l + 1 < weights_.size()) z = z.cwiseMax(Scalar(0));
      a = &z;
    }
    return *a;
  }

  Matrix forward(const Matrix& in) const {
    Matrix a = in;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      Matrix z = (weights_[l] * a).colwise() + biases_[l];
      if (l + 1 < weights_.size()) z = z.cwiseMax(Scalar(0));
      a = std::move(z);
    }
    return a;
  }

  /// Mean squared error over every output entry of the batch, with its
  /// gradient with respect to all parameters.
  Scalar loss_and_gradient(const Matrix& in, const Matrix& target, Gradients& grad) const {
    const std::size_t layers = weights_.size();
    std::vector<Matrix> acts;  // acts[l] is the input to layer l
    acts.reserve(layers + 1);
    acts.push_back(in);
    for (std::size_t l = 0; l < layers; ++l) {
      Matrix z = (weights_[l] * acts.back()).colwise() + biases_[l];
      if (l + 1 < layers) z = z.cwiseMax(Scalar(0));
      acts.push_back(std::move(z));
    }
    const Matrix diff = acts.back() - target;
    const Scalar count = Scalar(diff.size());
    const Scalar loss = diff.squaredNorm() / count;

    grad.weights.resize(layers);
    grad.biases.resize(layers);
    Matrix delta = (Scalar(2) / count) * diff;
    for (std::size_t l = layers; l-- > 0;) {
      grad.weights[l].noalias() = delta * acts[l].transpose();
      grad.biases[l] = delta.rowwise().sum();
      if (l > 0) {
        Matrix back = weights_[l].transpose() * delta;
        delta = back.cwiseProduct((acts[l].array() > Scalar(0)).template cast<Scalar>().matrix());
      }
    }
    return loss;
  }

  template <typename Other>
  Mlp<Other> cast() const {
    std::vector<typename Mlp<Other>::Matrix> w;
    std::vector<typename Mlp<Other>::Vector> b;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      w.push_back(weights_[l].template cast<Other>());
      b.push_back(biases_[l].template cast<Other>());
    }
    return Mlp<Other>(dims_, std::move(w), std::move(b));
  }

 private:
  std::vector<int> dims_;
  std::vector<Matrix> weights_;  // (out x in) per layer
  std::vector<Vector> biases_;
};

/// Adam with bias-corrected moments.
template <typename Scalar>
class Adam {
 public:
  struct Options {
    double lr = 0.0025;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  Adam(const Mlp<Scalar>& net, Options opt) : opt_(opt) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      mw_.push_back(Mlp<Scalar>::Matrix::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
      vw_.push_back(mw_.back());
      mb_.push_back(Mlp<Scalar>::Vector::Zero(net.biases()[l].size()));
      vb_.push_back(mb_.back());
    }
  }

  void step(Mlp<Scalar>& net, const typename Mlp<Scalar>::Gradients& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(opt_.beta1, t_);
    const double c2 = 1.0 - std::pow(opt_.beta2, t_);
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      update(net.weights()[l], mw_[l], vw_[l], g.weights[l], c1, c2);
      update(net.biases()[l], mb_[l], vb_[l], g.biases[l], c1, c2);
    }
  }

 private:
  template <typename P, typename G>
  void update(P& param, P& m, P& v, const G& grad, double c1, double c2) const {
    const auto b1 = Scalar(opt_.beta1), b2 = Scalar(opt_.beta2);
    m = b1 * m + (Scalar(1) - b1) * grad;
    v = b2 * v + (Scalar(1) - b2) * grad.cwiseProduct(grad);
    const Scalar step = Scalar(opt_.lr / c1);
    const Scalar root_c2 = Scalar(std::sqrt(c2));
    param.array() -= step * m.array() / (v.array().sqrt() / root_c2 + Scalar(opt_.eps));
  }

  Options opt_;
  int t_ = 0;
  std::vector<typename Mlp<Scalar>::Matrix> mw_, vw_;
  std::vector<typename Mlp<Scalar>::Vector> mb_, vb_;
};

}  // namespace iono::mbrl

#include "vic/learn/mlp.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {
namespace {

// tanh through the vectorized exp; std::tanh is scalar and dominates the update cost.
void activate(Activation a, Eigen::MatrixXd& x) {
  if (a == Activation::kTanh) x = 1.0 - 2.0 / ((2.0 * x.array()).exp() + 1.0);
}

// Multiplies `grad` in place by the activation derivative, written in terms of the
// activation output y.
void activation_backward(Activation a, const Eigen::MatrixXd& y, Eigen::MatrixXd& grad) {
  if (a == Activation::kTanh) grad.array() *= 1.0 - y.array().square();
}

}  // namespace

void Mlp::Gradients::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

Mlp::Mlp(std::vector<int> sizes, Activation hidden, Activation output)
    : sizes_(std::move(sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw ConfigError("network.sizes", "need at least input and output");
  for (int s : sizes_) {
    if (s < 1) throw ConfigError("network.sizes", "layer sizes must be positive");
  }
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    weights_.push_back(Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]));
    biases_.push_back(Eigen::VectorXd::Zero(sizes_[i + 1]));
  }
}

void Mlp::initialize(std::mt19937_64& rng, double final_scale) {
  for (int l = 0; l < num_layers(); ++l) {
    const bool last = l + 1 == num_layers();
    const double bound = last ? final_scale : 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    if (bound == 0.0) {
      weights_[l].setZero();
      biases_[l].setZero();
      continue;
    }
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index j = 0; j < weights_[l].cols(); ++j) {
      for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) weights_[l](i, j) = dist(rng);
    }
    for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l][i] = dist(rng);
  }
}

bool Mlp::same_architecture(const Mlp& other) const {
  return sizes_ == other.sizes_ && hidden_ == other.hidden_ && output_ == other.output_;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  if (input.rows() != input_dim()) {
    throw DimensionMismatch(
        fmt::format("network input has {} rows, expected {}", input.rows(), input_dim()));
  }
  Eigen::MatrixXd x = input;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd z = weights_[l] * x;
    z.colwise() += biases_[l];
    activate(l + 1 == num_layers() ? output_ : hidden_, z);
    x = std::move(z);
  }
  return x;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache& cache) const {
  if (input.rows() != input_dim()) {
    throw DimensionMismatch(
        fmt::format("network input has {} rows, expected {}", input.rows(), input_dim()));
  }
  cache.activations.resize(num_layers() + 1);
  cache.activations[0] = input;
  for (int l = 0; l < num_layers(); ++l) {
    Eigen::MatrixXd& z = cache.activations[l + 1];
    z.noalias() = weights_[l] * cache.activations[l];
    z.colwise() += biases_[l];
    activate(l + 1 == num_layers() ? output_ : hidden_, z);
  }
  return cache.activations.back();
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input)).col(0);
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& output_gradient,
                              Gradients& grads,
                              const Eigen::MatrixXd* preactivation_gradient) const {
  if (grads.weights.size() != weights_.size()) grads = zero_gradients();
  Eigen::MatrixXd delta = output_gradient;
  for (int l = num_layers() - 1; l >= 0; --l) {
    activation_backward(l + 1 == num_layers() ? output_ : hidden_, cache.activations[l + 1],
                        delta);
    if (preactivation_gradient != nullptr && l + 1 == num_layers()) {
      delta += *preactivation_gradient;
    }
    grads.weights[l].noalias() = delta * cache.activations[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
    Eigen::MatrixXd upstream = weights_[l].transpose() * delta;
    delta = std::move(upstream);
  }
  return delta;
}

Eigen::MatrixXd Mlp::output_preactivation(const Cache& cache) const {
  const int l = num_layers() - 1;
  Eigen::MatrixXd z = weights_[l] * cache.activations[l];
  z.colwise() += biases_[l];
  return z;
}

Eigen::MatrixXd Mlp::input_gradient(const Cache& cache,
                                    const Eigen::MatrixXd& output_gradient) const {
  Eigen::MatrixXd delta = output_gradient;
  for (int l = num_layers() - 1; l >= 0; --l) {
    activation_backward(l + 1 == num_layers() ? output_ : hidden_, cache.activations[l + 1],
                        delta);
    Eigen::MatrixXd upstream = weights_[l].transpose() * delta;
    delta = std::move(upstream);
  }
  return delta;
}

Mlp::Gradients Mlp::zero_gradients() const {
  Gradients g;
  for (int l = 0; l < num_layers(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    g.biases.push_back(Eigen::VectorXd::Zero(biases_[l].size()));
  }
  return g;
}

int Mlp::parameter_count() const {
  int n = 0;
  for (int l = 0; l < num_layers(); ++l) {
    n += static_cast<int>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Eigen::VectorXd Mlp::flat_parameters() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    flat.segment(k, weights_[l].size()) = weights_[l].reshaped();
    k += weights_[l].size();
    flat.segment(k, biases_[l].size()) = biases_[l];
    k += biases_[l].size();
  }
  return flat;
}

void Mlp::set_flat_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) {
    throw DimensionMismatch(fmt::format("expected {} parameters, got {}", parameter_count(),
                                        flat.size()));
  }
  Eigen::Index k = 0;
  for (int l = 0; l < num_layers(); ++l) {
    weights_[l].reshaped() = flat.segment(k, weights_[l].size());
    k += weights_[l].size();
    biases_[l] = flat.segment(k, biases_[l].size());
    k += biases_[l].size();
  }
}

bool Mlp::all_finite() const {
  for (int l = 0; l < num_layers(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
  }
  return true;
}

void soft_update(Mlp& target, const Mlp& source, double polyak) {
  if (!target.same_architecture(source)) {
    throw DimensionMismatch("soft_update: target and source architectures differ");
  }
  if (!(polyak >= 0.0 && polyak <= 1.0)) throw ConfigError("polyak", "must be in [0, 1]");
  for (int l = 0; l < target.num_layers(); ++l) {
    target.weights()[l] = polyak * source.weights()[l] + (1.0 - polyak) * target.weights()[l];
    target.biases()[l] = polyak * source.biases()[l] + (1.0 - polyak) * target.biases()[l];
  }
}

Adam::Adam(const Mlp& net, double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon),
      m_(net.zero_gradients()), v_(net.zero_gradients()) {}

void Adam::step(Mlp& net, const Mlp::Gradients& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseAbs2();
    param.array() -= step * m.array() / (v.array().sqrt() + eps_);
  };
  for (int l = 0; l < net.num_layers(); ++l) {
    update(net.weights()[l], grads.weights[l], m_.weights[l], v_.weights[l]);
    update(net.biases()[l], grads.biases[l], m_.biases[l], v_.biases[l]);
  }
}

}  // namespace vic

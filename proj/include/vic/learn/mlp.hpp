#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace vic {

enum class Activation { kIdentity, kTanh };

/// Fully connected network. Batches are stored column-wise (features x samples).
class Mlp {
 public:
  struct Cache {
    std::vector<Eigen::MatrixXd> activations;  // input, then the output of every layer
  };

  struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    void set_zero();
  };

  Mlp() = default;
  Mlp(std::vector<int> sizes, Activation hidden, Activation output);

  /// Uniform fan-in initialization; the last layer uses +-final_scale.
  void initialize(std::mt19937_64& rng, double final_scale = 3e-3);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int num_layers() const { return static_cast<int>(weights_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }
  bool same_architecture(const Mlp& other) const;

  /// Throws DimensionMismatch if the input has the wrong number of rows.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache& cache) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;

  /// Reverse-mode pass for a cached forward. Parameter gradients are summed over the
  /// batch into `grads` (overwritten); returns d(loss)/d(input). An optional
  /// `preactivation_gradient` is added to the gradient of the output layer's
  /// pre-activation, for losses on the pre-activation itself.
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& output_gradient,
                           Gradients& grads,
                           const Eigen::MatrixXd* preactivation_gradient = nullptr) const;
  /// Output-layer pre-activation of a cached forward.
  Eigen::MatrixXd output_preactivation(const Cache& cache) const;
  /// Input gradient only, skipping the parameter gradients.
  Eigen::MatrixXd input_gradient(const Cache& cache, const Eigen::MatrixXd& output_gradient) const;

  Gradients zero_gradients() const;

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  int parameter_count() const;
  Eigen::VectorXd flat_parameters() const;
  void set_flat_parameters(const Eigen::VectorXd& flat);
  bool all_finite() const;

 private:
  std::vector<int> sizes_;
  Activation hidden_ = Activation::kTanh;
  Activation output_ = Activation::kIdentity;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

/// target <- polyak * source + (1 - polyak) * target. Throws on architecture mismatch.
void soft_update(Mlp& target, const Mlp& source, double polyak);

/// Adam with bias correction.
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);

  /// Descends along `grads` (pass negated gradients to ascend).
  void step(Mlp& net, const Mlp::Gradients& grads);

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  Mlp::Gradients m_;
  Mlp::Gradients v_;
};

}  // namespace vic

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace vic {

struct Transition {
  Eigen::VectorXd obs;
  Eigen::VectorXd action;  // raw policy output in [-1, 1]^d
  double reward = 0.0;
  Eigen::VectorXd next_obs;
  bool terminal = false;
};

/// A batch laid out column-wise for the networks.
struct Batch {
  Eigen::MatrixXd obs;       // obs_dim x B
  Eigen::MatrixXd action;    // act_dim x B
  Eigen::VectorXd reward;    // B
  Eigen::MatrixXd next_obs;  // obs_dim x B
  Eigen::VectorXd terminal;  // B, 1.0 for terminal transitions

  int size() const { return static_cast<int>(reward.size()); }
};

/// Fixed-capacity ring of transitions stored in preallocated matrices.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim);

  void add(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  /// Indices drawn uniformly without replacement. Throws if size() < batch_size.
  std::vector<std::size_t> sample_indices(int batch_size, std::mt19937_64& rng) const;
  Batch sample(int batch_size, std::mt19937_64& rng) const;
  Batch gather(const std::vector<std::size_t>& indices) const;
  Transition at(std::size_t index) const;

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  Eigen::MatrixXd obs_;
  Eigen::MatrixXd action_;
  Eigen::VectorXd reward_;
  Eigen::MatrixXd next_obs_;
  Eigen::VectorXd terminal_;
};

}  // namespace vic

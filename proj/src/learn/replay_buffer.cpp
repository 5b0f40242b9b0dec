#include "vic/learn/replay_buffer.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim)
    : capacity_(capacity),
      obs_(obs_dim, static_cast<Eigen::Index>(capacity)),
      action_(act_dim, static_cast<Eigen::Index>(capacity)),
      reward_(static_cast<Eigen::Index>(capacity)),
      next_obs_(obs_dim, static_cast<Eigen::Index>(capacity)),
      terminal_(static_cast<Eigen::Index>(capacity)) {
  if (capacity == 0) throw ConfigError("buffer_capacity", "must be > 0");
}

void ReplayBuffer::add(const Transition& t) {
  if (t.obs.size() != obs_.rows() || t.next_obs.size() != obs_.rows() ||
      t.action.size() != action_.rows()) {
    throw DimensionMismatch("transition does not match the buffer layout");
  }
  const auto i = static_cast<Eigen::Index>(next_);
  obs_.col(i) = t.obs;
  action_.col(i) = t.action;
  reward_[i] = t.reward;
  next_obs_.col(i) = t.next_obs;
  terminal_[i] = t.terminal ? 1.0 : 0.0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

// Floyd's algorithm: exactly `batch_size` distinct indices, each subset equally likely.
std::vector<std::size_t> ReplayBuffer::sample_indices(int batch_size, std::mt19937_64& rng) const {
  const auto b = static_cast<std::size_t>(batch_size);
  if (b > size_) {
    throw Error(fmt::format("cannot sample {} transitions from a buffer of {}", b, size_));
  }
  std::vector<std::size_t> out;
  out.reserve(b);
  for (std::size_t j = size_ - b; j < size_; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    } else {
      out.push_back(j);
    }
  }
  return out;
}

Batch ReplayBuffer::gather(const std::vector<std::size_t>& indices) const {
  const auto n = static_cast<Eigen::Index>(indices.size());
  Batch batch;
  batch.obs.resize(obs_.rows(), n);
  batch.action.resize(action_.rows(), n);
  batch.reward.resize(n);
  batch.next_obs.resize(obs_.rows(), n);
  batch.terminal.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(indices[k]);
    batch.obs.col(k) = obs_.col(i);
    batch.action.col(k) = action_.col(i);
    batch.reward[k] = reward_[i];
    batch.next_obs.col(k) = next_obs_.col(i);
    batch.terminal[k] = terminal_[i];
  }
  return batch;
}

Batch ReplayBuffer::sample(int batch_size, std::mt19937_64& rng) const {
  return gather(sample_indices(batch_size, rng));
}

Transition ReplayBuffer::at(std::size_t index) const {
  if (index >= size_) throw Error("replay index out of range");
  const auto i = static_cast<Eigen::Index>(index);
  return {obs_.col(i), action_.col(i), reward_[i], next_obs_.col(i), terminal_[i] > 0.5};
}

}  // namespace vic

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "vic/learn/mlp.hpp"
#include "vic/learn/replay_buffer.hpp"

namespace vic {

enum class NoiseKind { kGaussian, kOrnsteinUhlenbeck };

struct TrainerConfig {
  double gamma = 0.99;
  double polyak = 0.005;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  int batch_size = 128;
  int buffer_capacity = 200000;
  int warmup_steps = 1000;
  double updates_per_step = 1.0;
  int episodes = 600;
  std::vector<int> hidden{64, 64};
  NoiseKind noise = NoiseKind::kGaussian;
  double noise_scale = 0.2;   // std of the raw-action noise at the start
  double noise_final = 0.05;  // reached after noise_decay_episodes (linear)
  int noise_decay_episodes = 0;  // 0: decay over the whole budget
  double ou_theta = 0.15;
  int eval_every = 10;
  int eval_episodes = 1;
  double reward_scale = 1.0;  // applied inside the critic target only
  double init_scale = 3e-3;   // half-width of the uniform output-layer init; 0 zeroes it
  double preactivation_penalty = 0.01;  // actor loss weight on the mean squared pre-tanh output

  /// Throws ConfigError naming the offending field.
  void validate() const;
  double noise_at(int episode) const;
};

/// Actor, critic, their slowly tracking targets, and the optimizers.
struct ActorCritic {
  Mlp actor;          // obs -> [-1, 1]^act_dim (tanh output)
  Mlp critic;         // [obs; action] -> Q
  Mlp actor_target;
  Mlp critic_target;
  Adam actor_opt;
  Adam critic_opt;
};

ActorCritic make_actor_critic(int obs_dim, int act_dim, const TrainerConfig& cfg,
                              std::mt19937_64& rng);

/// y = reward_scale * r + gamma * (1 - terminal) * Q_target(s', actor_target(s')).
Eigen::VectorXd critic_targets(const Batch& batch, const ActorCritic& nets,
                               const TrainerConfig& cfg);

/// One Adam step on the mean squared TD error; returns the loss before the step.
double critic_update(const Batch& batch, ActorCritic& nets, const TrainerConfig& cfg);

/// One ascent step on mean Q(s, actor(s)) through the (unchanged) critic, minus the
/// pre-activation penalty; returns mean Q before the step.
double actor_update(const Batch& batch, ActorCritic& nets, const TrainerConfig& cfg);

/// Stacks observations over actions, the critic's input layout.
Eigen::MatrixXd critic_input(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& action);

}  // namespace vic

#include "vic/learn/ddpg.hpp"

#include <algorithm>
#include <cmath>

#include "vic/error.hpp"

namespace vic {

void TrainerConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("trainer.gamma", "must be in (0, 1)");
  if (!(polyak > 0.0 && polyak <= 1.0)) throw ConfigError("trainer.polyak", "must be in (0, 1]");
  if (!(actor_lr > 0.0)) throw ConfigError("trainer.actor_lr", "must be > 0");
  if (!(critic_lr > 0.0)) throw ConfigError("trainer.critic_lr", "must be > 0");
  if (batch_size < 1) throw ConfigError("trainer.batch_size", "must be > 0");
  if (buffer_capacity < batch_size) {
    throw ConfigError("trainer.buffer_capacity", "must be >= batch_size");
  }
  if (warmup_steps < 0) throw ConfigError("trainer.warmup_steps", "must be >= 0");
  if (!(updates_per_step > 0.0)) throw ConfigError("trainer.updates_per_step", "must be > 0");
  if (episodes < 1) throw ConfigError("trainer.episodes", "must be > 0");
  if (hidden.empty()) throw ConfigError("trainer.hidden", "need at least one hidden layer");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("trainer.hidden", "layer sizes must be > 0");
  }
  if (!(noise_scale >= 0.0)) throw ConfigError("trainer.noise_scale", "must be >= 0");
  if (!(noise_final >= 0.0)) throw ConfigError("trainer.noise_final", "must be >= 0");
  if (noise_decay_episodes < 0) throw ConfigError("trainer.noise_decay_episodes", "must be >= 0");
  if (!(ou_theta > 0.0 && ou_theta <= 1.0)) throw ConfigError("trainer.ou_theta", "must be in (0, 1]");
  if (eval_every < 1) throw ConfigError("trainer.eval_every", "must be > 0");
  if (eval_episodes < 1) throw ConfigError("trainer.eval_episodes", "must be > 0");
  if (!(reward_scale > 0.0)) throw ConfigError("trainer.reward_scale", "must be > 0");
  if (!(init_scale >= 0.0)) throw ConfigError("trainer.init_scale", "must be >= 0");
  if (!(preactivation_penalty >= 0.0) || !std::isfinite(preactivation_penalty)) {
    throw ConfigError("trainer.preactivation_penalty", "must be >= 0");
  }
}

double TrainerConfig::noise_at(int episode) const {
  const int span = noise_decay_episodes > 0 ? noise_decay_episodes : episodes;
  const double frac = std::clamp(static_cast<double>(episode) / span, 0.0, 1.0);
  return noise_scale + frac * (noise_final - noise_scale);
}

ActorCritic make_actor_critic(int obs_dim, int act_dim, const TrainerConfig& cfg,
                              std::mt19937_64& rng) {
  std::vector<int> actor_sizes{obs_dim};
  actor_sizes.insert(actor_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  actor_sizes.push_back(act_dim);
  std::vector<int> critic_sizes{obs_dim + act_dim};
  critic_sizes.insert(critic_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  critic_sizes.push_back(1);

  ActorCritic nets;
  nets.actor = Mlp(actor_sizes, Activation::kTanh, Activation::kTanh);
  nets.critic = Mlp(critic_sizes, Activation::kTanh, Activation::kIdentity);
  nets.actor.initialize(rng, cfg.init_scale);
  nets.critic.initialize(rng, cfg.init_scale);
  nets.actor_target = nets.actor;
  nets.critic_target = nets.critic;
  nets.actor_opt = Adam(nets.actor, cfg.actor_lr);
  nets.critic_opt = Adam(nets.critic, cfg.critic_lr);
  return nets;
}

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& action) {
  Eigen::MatrixXd x(obs.rows() + action.rows(), obs.cols());
  x.topRows(obs.rows()) = obs;
  x.bottomRows(action.rows()) = action;
  return x;
}

Eigen::VectorXd critic_targets(const Batch& batch, const ActorCritic& nets,
                               const TrainerConfig& cfg) {
  const Eigen::MatrixXd next_action = nets.actor_target.forward(batch.next_obs);
  const Eigen::VectorXd next_q =
      nets.critic_target.forward(critic_input(batch.next_obs, next_action)).row(0).transpose();
  const Eigen::VectorXd not_done = (1.0 - batch.terminal.array()).matrix();
  return cfg.reward_scale * batch.reward + cfg.gamma * not_done.cwiseProduct(next_q);
}

double critic_update(const Batch& batch, ActorCritic& nets, const TrainerConfig& cfg) {
  const Eigen::VectorXd y = critic_targets(batch, nets, cfg);
  Mlp::Cache cache;
  const Eigen::MatrixXd q = nets.critic.forward(critic_input(batch.obs, batch.action), cache);
  const Eigen::RowVectorXd err = q.row(0) - y.transpose();
  const double n = static_cast<double>(batch.size());
  const double loss = err.squaredNorm() / n;
  Mlp::Gradients grads;
  nets.critic.backward(cache, (2.0 / n) * err, grads);
  nets.critic_opt.step(nets.critic, grads);
  return loss;
}

double actor_update(const Batch& batch, ActorCritic& nets, const TrainerConfig& cfg) {
  Mlp::Cache actor_cache;
  const Eigen::MatrixXd action = nets.actor.forward(batch.obs, actor_cache);
  Mlp::Cache critic_cache;
  const Eigen::MatrixXd q = nets.critic.forward(critic_input(batch.obs, action), critic_cache);
  const double n = static_cast<double>(batch.size());
  const double objective = q.sum() / n;

  // Minimize -mean Q: d(-Q/n)/dQ = -1/n. The critic is left untouched.
  const Eigen::MatrixXd d_input = nets.critic.input_gradient(
      critic_cache, Eigen::MatrixXd::Constant(1, batch.size(), -1.0 / n));
  Mlp::Gradients actor_grads;
  if (cfg.preactivation_penalty > 0.0) {
    // Keeps the output tanh out of saturation, where the critic's gradient vanishes.
    const Eigen::MatrixXd d_pre =
        (2.0 * cfg.preactivation_penalty / n) * nets.actor.output_preactivation(actor_cache);
    nets.actor.backward(actor_cache, d_input.bottomRows(action.rows()), actor_grads, &d_pre);
  } else {
    nets.actor.backward(actor_cache, d_input.bottomRows(action.rows()), actor_grads);
  }
  nets.actor_opt.step(nets.actor, actor_grads);
  return objective;
}

}  // namespace vic

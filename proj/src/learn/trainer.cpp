#include "vic/learn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "vic/error.hpp"
#include "vic/learn/replay_buffer.hpp"

namespace vic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t seed, int episode) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(episode));
}

std::uint64_t eval_seed(std::uint64_t seed, int index) {
  return splitmix64(splitmix64(seed ^ 0x5EEDE7A1ULL) + static_cast<std::uint64_t>(index));
}

Eigen::VectorXd Policy::normalize(const Eigen::VectorXd& obs) const {
  if (obs.size() != obs_offset.size()) {
    throw DimensionMismatch(fmt::format("observation has {} entries, policy expects {}",
                                        obs.size(), obs_offset.size()));
  }
  return ((obs - obs_offset).array() / obs_scale.array()).matrix();
}

Eigen::VectorXd Policy::raw_action(const Eigen::VectorXd& obs) const {
  return actor.forward(normalize(obs));
}

ControlCommand Policy::command(const Eigen::VectorXd& obs) const {
  return codec.decode(raw_action(obs));
}

Policy make_policy(const Environment& env, Mlp actor, std::uint64_t seed) {
  Policy p;
  p.env_id = std::string(env.id());
  p.codec = env.codec();
  p.obs_offset = env.observation_offset();
  p.obs_scale = env.observation_scale();
  p.actor = std::move(actor);
  p.seed = seed;
  return p;
}

EpisodeDiagnostics run_episode(Environment& env, const Policy& policy, std::uint64_t seed,
                               const StepObserver& observer) {
  DiagnosticsAccumulator acc;
  Eigen::VectorXd obs = env.reset(seed);
  while (!env.done()) {
    StepResult r = env.step(policy.command(obs));
    acc.add(r);
    if (observer) observer(obs, r);
    obs = std::move(r.observation);
  }
  return acc.finish();
}

TrainResult train(Environment& env, const TrainerConfig& cfg, std::uint64_t seed,
                  const ProgressFn& progress) {
  cfg.validate();
  const int obs_dim = env.observation_dim();
  const int act_dim = env.codec().action_dim();

  std::mt19937_64 init_rng(splitmix64(seed ^ 0x1417ULL));
  std::mt19937_64 noise_rng(splitmix64(seed ^ 0x2A5EULL));
  std::mt19937_64 sample_rng(splitmix64(seed ^ 0x3B0FULL));
  ActorCritic nets = make_actor_critic(obs_dim, act_dim, cfg, init_rng);
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity), obs_dim, act_dim);

  TrainResult result;
  result.policy = make_policy(env, nets.actor, seed);
  result.best_policy = result.policy;
  result.best_eval_score = -std::numeric_limits<double>::infinity();

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  double update_credit = 0.0;
  const std::size_t start_size =
      static_cast<std::size_t>(std::max(cfg.batch_size, cfg.warmup_steps));

  auto abort = [&](std::string why) {
    result.failed = true;
    result.failure = std::move(why);
  };

  for (int ep = 0; ep < cfg.episodes && !result.failed; ++ep) {
    const double sigma = cfg.noise_at(ep);
    Eigen::VectorXd ou_state = Eigen::VectorXd::Zero(act_dim);
    Eigen::VectorXd obs = result.policy.normalize(env.reset(episode_seed(seed, ep)));
    DiagnosticsAccumulator acc;

    while (!env.done() && !result.failed) {
      Eigen::VectorXd action(act_dim);
      if (result.env_steps < cfg.warmup_steps) {
        for (int i = 0; i < act_dim; ++i) action[i] = uniform(noise_rng);
      } else {
        action = nets.actor.forward(obs);
        for (int i = 0; i < act_dim; ++i) {
          if (cfg.noise == NoiseKind::kGaussian) {
            action[i] += sigma * normal(noise_rng);
          } else {
            ou_state[i] += -cfg.ou_theta * ou_state[i] + sigma * normal(noise_rng);
            action[i] += ou_state[i];
          }
        }
        action = action.cwiseMax(-1.0).cwiseMin(1.0);
      }

      StepResult step = env.step_raw(action);
      ++result.env_steps;
      const double reward = step.reward.total();
      acc.add(step);
      Eigen::VectorXd next_obs = result.policy.normalize(step.observation);
      if (!std::isfinite(reward) || !next_obs.allFinite()) {
        abort(fmt::format("non-finite transition at episode {}", ep));
        break;
      }
      buffer.add({obs, action, reward, next_obs, step.info.diverged});
      obs = std::move(next_obs);

      if (buffer.size() < start_size) continue;
      update_credit += cfg.updates_per_step;
      while (update_credit >= 1.0) {
        update_credit -= 1.0;
        const Batch batch = buffer.sample(cfg.batch_size, sample_rng);
        const double loss = critic_update(batch, nets, cfg);
        const double objective = actor_update(batch, nets, cfg);
        if (!std::isfinite(loss) || !std::isfinite(objective) || !nets.critic.all_finite() ||
            !nets.actor.all_finite()) {
          abort(fmt::format("non-finite loss at episode {}", ep));
          break;
        }
        soft_update(nets.actor_target, nets.actor, cfg.polyak);
        soft_update(nets.critic_target, nets.critic, cfg.polyak);
      }
    }
    if (result.failed) break;

    result.policy.actor = nets.actor;
    CurvePoint point;
    point.episode = ep;
    point.train = acc.finish();
    point.score = point.train.score;
    point.eval_score = std::numeric_limits<double>::quiet_NaN();
    if ((ep + 1) % cfg.eval_every == 0 || ep + 1 == cfg.episodes) {
      double total = 0.0;
      for (int k = 0; k < cfg.eval_episodes; ++k) {
        total += run_episode(env, result.policy, eval_seed(seed, k)).score;
      }
      point.eval_score = total / cfg.eval_episodes;
      if (point.eval_score > result.best_eval_score) {
        result.best_eval_score = point.eval_score;
        result.best_policy = result.policy;
      }
    }
    result.curve.push_back(point);
    if (progress) progress(point);
  }
  return result;
}

}  // namespace vic

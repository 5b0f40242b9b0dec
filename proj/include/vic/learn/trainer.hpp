#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vic/control/controllers.hpp"
#include "vic/envs/diagnostics.hpp"
#include "vic/envs/environment.hpp"
#include "vic/learn/ddpg.hpp"
#include "vic/learn/mlp.hpp"

namespace vic {

/// A trained deterministic policy together with everything needed to run it.
struct Policy {
  std::string env_id;
  ActionCodec codec;
  Eigen::VectorXd obs_offset;
  Eigen::VectorXd obs_scale;
  Mlp actor;
  std::uint64_t seed = 0;

  Eigen::VectorXd normalize(const Eigen::VectorXd& obs) const;
  /// Network output in [-1, 1]^d.
  Eigen::VectorXd raw_action(const Eigen::VectorXd& obs) const;
  ControlCommand command(const Eigen::VectorXd& obs) const;
};

/// Builds a policy shell for `env` around an actor.
Policy make_policy(const Environment& env, Mlp actor, std::uint64_t seed);

/// Called after each step with the observation the action was computed from.
using StepObserver = std::function<void(const Eigen::VectorXd& obs, const StepResult& result)>;

/// Runs one noise-free episode from `env.reset(seed)`.
EpisodeDiagnostics run_episode(Environment& env, const Policy& policy, std::uint64_t seed,
                         const StepObserver& observer = {});

struct CurvePoint {
  int episode = 0;
  double score = 0.0;       // undiscounted reward sum of the training episode
  double eval_score = 0.0;  // NaN on episodes without an evaluation
  EpisodeDiagnostics train;  // diagnostics of the (noisy) training episode
};

struct TrainResult {
  Policy policy;       // after the last episode
  Policy best_policy;  // highest evaluation score
  double best_eval_score = 0.0;
  std::vector<CurvePoint> curve;
  long env_steps = 0;
  bool failed = false;
  std::string failure;
};

using ProgressFn = std::function<void(const CurvePoint&)>;

/// Deterministic per-episode and per-evaluation reset seeds derived from a run seed.
std::uint64_t episode_seed(std::uint64_t seed, int episode);
std::uint64_t eval_seed(std::uint64_t seed, int index);

/// DDPG training. Exploration noise is added to the raw action and clamped to [-1, 1].
/// Every `eval_every` episodes (and after the last) the policy is evaluated without
/// noise on `eval_episodes` fixed seeds. Transitions are marked terminal only when the
/// simulation diverged; time-limit truncation bootstraps. A non-finite loss or network
/// aborts the run with `failed` set.
TrainResult train(Environment& env, const TrainerConfig& cfg, std::uint64_t seed,
                  const ProgressFn& progress = {});

}  // namespace vic

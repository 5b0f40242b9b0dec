#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vic/envs/diagnostics.hpp"
#include "vic/harness/experiment_spec.hpp"
#include "vic/learn/trainer.hpp"

namespace vic {

struct EvalReport {
  std::vector<std::uint64_t> episode_seeds;
  std::vector<EpisodeDiagnostics> episodes;
  EpisodeDiagnostics mean;  // field-wise mean (contact_losses rounded down)
  double mean_contact_losses = 0.0;
};

/// Column names of an episode trace:
/// t, q.., qdot.., tau.., q_des.., kp.., fn, <reward terms>, total.
std::vector<std::string> trace_header(const Environment& env);

/// Runs `n_episodes` noise-free episodes of `policy` in the environment described by
/// `spec` (reset seeds eval_seed(seed, k)). When `trace_dir` is non-empty one trace CSV
/// per episode is written there. Throws MismatchError if the policy does not fit.
EvalReport evaluate_policy(const Policy& policy, const ExperimentSpec& spec, int n_episodes,
                           std::uint64_t seed, const std::string& trace_dir = "");

/// Writes per-episode metrics as CSV.
void write_eval_report(const EvalReport& report, const std::string& path);

}  // namespace vic

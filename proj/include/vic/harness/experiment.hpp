#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vic/harness/experiment_spec.hpp"
#include "vic/learn/trainer.hpp"

namespace vic {

struct SeedResult {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  std::vector<CurvePoint> curve;  // padded with NaN scores after an abort
  double final_score = 0.0;       // mean of the last `final_window` evaluations
  double best_eval_score = 0.0;
  bool converged = false;
  long env_steps = 0;
  Policy best_policy;
};

struct CurveStats {
  std::vector<double> score_mean, score_std;  // per episode over seeds
  std::vector<double> eval_mean, eval_std;    // NaN where no evaluation took place
  std::vector<int> contributing;              // seeds with a finite score per episode
};

/// Aggregated outcome of one ExperimentSpec.
struct RunSummary {
  ExperimentSpec spec;
  std::vector<SeedResult> seeds;  // in spec.seeds order
  CurveStats curves;
  double mean_final = 0.0;  // over seeds that did not fail
  double std_final = 0.0;   // population std
  double best_score = 0.0;  // highest evaluation score of any seed
  double threshold = 0.0;
  double converged_fraction = 0.0;  // converged seeds / all seeds

  int failed_count() const;
  /// Index of the seed with the highest best-evaluation score (-1 if all failed).
  int best_seed() const;
};

/// Mean and population std of the finite values; {NaN, NaN} when there are none.
std::pair<double, double> mean_std(const std::vector<double>& values);

/// Mean of the last `window` evaluation scores of a curve (NaN if there are none).
double final_eval_score(const std::vector<CurvePoint>& curve, int window);

CurveStats aggregate_curves(const std::vector<SeedResult>& seeds, int episodes);

/// Sets threshold = fraction * max(best_score over `group`) and recomputes every
/// converged flag (final_score > threshold) and converged fraction.
void apply_convergence_threshold(std::vector<RunSummary*> group, double fraction);

/// Whether run_experiment may return the outputs of an earlier identical run.
enum class Reuse { kNever, kIfComplete };

/// Loads a finished run from `spec.output_dir` if its spec.yaml matches `spec` exactly
/// and every per-seed artifact is present.
std::optional<RunSummary> load_run(const ExperimentSpec& spec);

/// Trains every seed (in parallel across seeds), aggregates, and writes
///   <output_dir>/spec.yaml, summary.csv, curve_stats.csv, best.ckpt
///   <output_dir>/seed_<s>/curve.csv, diagnostics.csv, final.ckpt, best.ckpt
/// A failed seed is recorded and never stops the others.
/// With Reuse::kIfComplete a complete earlier run of the same spec is loaded instead.
RunSummary run_experiment(const ExperimentSpec& spec, bool write_files = true,
                          Reuse reuse = Reuse::kNever);

/// Rewrites summary.csv after a threshold change.
void write_summary(const RunSummary& summary);

}  // namespace vic

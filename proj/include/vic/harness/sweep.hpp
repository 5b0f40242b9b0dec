#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vic/harness/experiment.hpp"

namespace vic {

enum class SweepVariable { kHeight, kFriction, kStiffness };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

/// Copy of `base` with exactly one contact variable randomized: ground height for the
/// hopper, table height / friction / stiffness for the wiper.
ExperimentSpec robustness_spec(const ExperimentSpec& base, SweepVariable variable,
                               Parametrization parametrization);

struct SweepCell {
  SweepVariable variable;
  Parametrization parametrization;
  RunSummary summary;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // variables x parametrizations, variable-major

  const SweepCell& cell(SweepVariable v, Parametrization p) const;
  /// Variable-gain mean final score minus the best alternative mean.
  double margin(SweepVariable v) const;
};

/// One experiment per (variable, parametrization) under `<base.output_dir>/<variable>/
/// <parametrization>`. Convergence thresholds are shared within a variable. Writes
/// `<base.output_dir>/robustness.csv`.
SweepResult robustness_sweep(const ExperimentSpec& base, const std::vector<SweepVariable>& variables,
                             const std::vector<Parametrization>& parametrizations = {
                                 Parametrization::kTorque, Parametrization::kFixedGainPD,
                                 Parametrization::kVariableGainPD},
                             Reuse reuse = Reuse::kNever);

void write_robustness_table(const SweepResult& result, const std::string& path);

/// Fixed-gain runs over several kp values under `<base.output_dir>/kp_<kp>`, writing
/// one row per gain to `<base.output_dir>/gain_sweep.csv`.
std::vector<RunSummary> gain_sweep(const ExperimentSpec& base, const std::vector<double>& kps,
                                   Reuse reuse = Reuse::kNever);

void write_gain_table(const std::vector<RunSummary>& runs, const std::string& path);

}  // namespace vic

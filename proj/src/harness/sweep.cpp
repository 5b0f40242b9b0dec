#include "vic/harness/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include <fmt/format.h>

#include "vic/error.hpp"
#include "vic/io/csv.hpp"

namespace fs = std::filesystem;

namespace vic {

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kHeight: return "height";
    case SweepVariable::kFriction: return "friction";
    case SweepVariable::kStiffness: return "stiffness";
  }
  return "height";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "height") return SweepVariable::kHeight;
  if (name == "friction") return SweepVariable::kFriction;
  if (name == "stiffness") return SweepVariable::kStiffness;
  throw ConfigError("variable", fmt::format("unknown sweep variable '{}' (height | friction | "
                                            "stiffness)", name));
}

ExperimentSpec robustness_spec(const ExperimentSpec& base, SweepVariable variable,
                               Parametrization parametrization) {
  ExperimentSpec s = base;
  s.parametrization = parametrization;
  s.name = fmt::format("{}_{}_{}", base.name, to_string(variable), to_string(parametrization));
  s.output_dir = (fs::path(base.output_dir) / std::string(to_string(variable)) /
                  std::string(to_string(parametrization)))
                     .string();
  if (s.env == "hopper") {
    if (variable != SweepVariable::kHeight) {
      throw ConfigError("variable", "the hopper only supports the height sweep");
    }
    s.hopper.uncertainty.ground_height_active = true;
    return s;
  }
  if (s.env != "wiper") throw ConfigError("env", "robustness sweeps need the hopper or the wiper");
  UncertaintySpec& u = s.wiper.uncertainty;
  u.ground_height_active = false;
  u.table_height_active = variable == SweepVariable::kHeight;
  u.friction_active = variable == SweepVariable::kFriction;
  u.stiffness_active = variable == SweepVariable::kStiffness;
  return s;
}

const SweepCell& SweepResult::cell(SweepVariable v, Parametrization p) const {
  for (const auto& c : cells) {
    if (c.variable == v && c.parametrization == p) return c;
  }
  throw Error(fmt::format("sweep has no cell {} / {}", to_string(v), to_string(p)));
}

double SweepResult::margin(SweepVariable v) const {
  const double var = cell(v, Parametrization::kVariableGainPD).summary.mean_final;
  double best_alt = -std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    if (c.variable == v && c.parametrization != Parametrization::kVariableGainPD) {
      best_alt = std::max(best_alt, c.summary.mean_final);
    }
  }
  return var - best_alt;
}

SweepResult robustness_sweep(const ExperimentSpec& base, const std::vector<SweepVariable>& variables,
                             const std::vector<Parametrization>& parametrizations, Reuse reuse) {
  SweepResult result;
  for (SweepVariable v : variables) {
    const std::size_t first = result.cells.size();
    for (Parametrization p : parametrizations) {
      result.cells.push_back({v, p, run_experiment(robustness_spec(base, v, p), true, reuse)});
    }
    std::vector<RunSummary*> group;
    for (std::size_t i = first; i < result.cells.size(); ++i) group.push_back(&result.cells[i].summary);
    apply_convergence_threshold(group, base.convergence_fraction);
    for (RunSummary* s : group) write_summary(*s);
  }
  fs::create_directories(base.output_dir);
  write_robustness_table(result, (fs::path(base.output_dir) / "robustness.csv").string());
  return result;
}

void write_robustness_table(const SweepResult& result, const std::string& path) {
  CsvWriter w(path, {"variable", "parametrization", "mean_final", "std_final",
                     "converged_fraction", "threshold", "variable_gain_margin"});
  const bool has_variable = std::any_of(result.cells.begin(), result.cells.end(), [](const auto& c) {
    return c.parametrization == Parametrization::kVariableGainPD;
  });
  for (const auto& c : result.cells) {
    const double margin =
        has_variable ? result.margin(c.variable) : std::numeric_limits<double>::quiet_NaN();
    w.row(std::vector<std::string>{
        std::string(to_string(c.variable)), std::string(to_string(c.parametrization)),
        format_double(c.summary.mean_final), format_double(c.summary.std_final),
        format_double(c.summary.converged_fraction), format_double(c.summary.threshold),
        format_double(margin)});
  }
}

std::vector<RunSummary> gain_sweep(const ExperimentSpec& base, const std::vector<double>& kps,
                                   Reuse reuse) {
  std::vector<RunSummary> runs;
  for (double kp : kps) {
    ExperimentSpec s = base;
    s.parametrization = Parametrization::kFixedGainPD;
    s.controller.kp = kp;
    s.name = fmt::format("{}_kp_{}", base.name, kp);
    s.output_dir = (fs::path(base.output_dir) / fmt::format("kp_{}", kp)).string();
    runs.push_back(run_experiment(s, true, reuse));
  }
  std::vector<RunSummary*> group;
  for (auto& r : runs) group.push_back(&r);
  apply_convergence_threshold(group, base.convergence_fraction);
  for (auto& r : runs) write_summary(r);
  fs::create_directories(base.output_dir);
  write_gain_table(runs, (fs::path(base.output_dir) / "gain_sweep.csv").string());
  return runs;
}

void write_gain_table(const std::vector<RunSummary>& runs, const std::string& path) {
  CsvWriter w(path, {"kp", "mean_final", "std_final", "converged_fraction", "failed"});
  for (const auto& r : runs) {
    w.row({r.spec.controller.kp, r.mean_final, r.std_final, r.converged_fraction,
           static_cast<double>(r.failed_count())});
  }
}

}  // namespace vic

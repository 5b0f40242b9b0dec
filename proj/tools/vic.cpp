// Command line front end: train, sweep, eval, report.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vic/error.hpp"
#include "vic/harness/evaluate.hpp"
#include "vic/harness/experiment.hpp"
#include "vic/harness/report.hpp"
#include "vic/harness/sweep.hpp"
#include "vic/io/checkpoint.hpp"
#include "vic/io/config.hpp"

namespace fs = std::filesystem;
using namespace vic;

namespace {

/// "0,1,2", "0-9" or a mix such as "0-3,7".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
    if (part.empty()) throw ConfigError("seeds", fmt::format("malformed seed list '{}'", text));
    try {
      const std::size_t dash = part.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (lo > hi) throw ConfigError("seeds", fmt::format("lo > hi in '{}'", part));
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("seeds", fmt::format("malformed seed list '{}'", text));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

std::vector<double> parse_numbers(const std::string& text, const char* field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw ConfigError(field, fmt::format("malformed number list '{}'", text));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Flags shared by train and sweep. Unset flags keep the environment defaults.
struct SpecFlags {
  std::string env = "hopper";
  std::optional<std::string> parametrization;
  std::optional<double> kp;
  std::optional<double> tracking_k;
  std::optional<std::string> seeds;
  std::optional<int> episodes;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<int> threads;

  void attach(CLI::App* app) {
    app->add_option("--env", env, "hopper | wiper | point_mass")->capture_default_str();
    app->add_option("--parametrization", parametrization, "torque | fixed_pd | variable_pd");
    app->add_option("--kp", kp, "fixed-gain stiffness");
    app->add_option("--tracking-k", tracking_k, "tracking penalty weight (0 disables)");
    app->add_option("--seeds", seeds, "seed list, e.g. 0-9 or 0,3,5");
    app->add_option("--episodes", episodes, "training episodes per seed");
    app->add_option("--out", out, "output directory");
    app->add_option("--config", config, "YAML experiment file; its keys override flags");
    app->add_option("--threads", threads, "parallel seeds (0 = all cores)");
  }

  ExperimentSpec build() const {
    ExperimentSpec s = ExperimentSpec::defaults_for(env);
    if (parametrization) s.parametrization = parse_parametrization(*parametrization);
    if (kp) s.controller.kp = *kp;
    if (tracking_k) {
      s.tracking.k = *tracking_k;
      s.tracking.enabled = *tracking_k > 0.0;
    }
    if (seeds) s.seeds = parse_seeds(*seeds);
    if (episodes) s.trainer.episodes = *episodes;
    if (out) s.output_dir = *out;
    if (threads) s.threads = *threads;
    if (config) s = load_experiment(*config, s);
    s.validate();
    return s;
  }
};

void print_summary(const RunSummary& s) {
  fmt::print("{} [{} / {}]: mean final {:.3f} +- {:.3f}, converged {:.2f} (threshold {:.3f}), "
             "failed {}/{}\n",
             s.spec.name, s.spec.env, to_string(s.spec.parametrization), s.mean_final, s.std_final,
             s.converged_fraction, s.threshold, s.failed_count(), s.seeds.size());
  for (const auto& r : s.seeds) {
    if (r.failed) fmt::print("  seed {} failed: {}\n", r.seed, r.failure);
  }
}

/// Spec for evaluating a checkpoint: an explicit config, else the spec.yaml written
/// next to it by run_experiment, else the environment defaults.
ExperimentSpec eval_spec(const std::string& checkpoint, const Policy& policy,
                         const std::optional<std::string>& config) {
  if (config) return load_experiment(*config);
  for (fs::path dir = fs::absolute(checkpoint).parent_path(); !dir.empty();
       dir = dir.parent_path()) {
    if (fs::exists(dir / "spec.yaml")) {
      ExperimentSpec s = load_experiment((dir / "spec.yaml").string());
      if (s.env == policy.env_id && s.parametrization == policy.codec.parametrization) return s;
    }
    if (dir == dir.root_path()) break;
  }
  ExperimentSpec s = ExperimentSpec::defaults_for(policy.env_id);
  s.parametrization = policy.codec.parametrization;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Action-space comparison workbench for contact-rich reinforcement learning"};
  app.require_subcommand(1);
  app.fallthrough();
  bool strict = false;
  app.add_flag("--strict", strict, "exit with status 1 if any seed failed");

  auto* train_cmd = app.add_subcommand("train", "train one parametrization over several seeds");
  SpecFlags train_flags;
  train_flags.attach(train_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "robustness or fixed-gain sweeps");
  SpecFlags sweep_flags;
  sweep_flags.attach(sweep_cmd);
  std::string variable = "height";
  std::string kp_values = "1,3,5,8,10";
  sweep_cmd->add_option("--variable", variable, "height | friction | stiffness | all | kp")
      ->capture_default_str();
  sweep_cmd->add_option("--kp-values", kp_values, "gains for --variable kp")->capture_default_str();

  auto* eval_cmd = app.add_subcommand("eval", "noise-free evaluation of a checkpoint");
  std::string checkpoint;
  int eval_episodes = 5;
  std::uint64_t eval_seed_value = 0;
  std::optional<std::string> eval_config;
  std::optional<std::string> eval_out;
  eval_cmd->add_option("--checkpoint", checkpoint, "policy checkpoint")->required();
  eval_cmd->add_option("--episodes", eval_episodes, "episodes to run")->capture_default_str();
  eval_cmd->add_option("--seed", eval_seed_value, "evaluation seed")->capture_default_str();
  eval_cmd->add_option("--config", eval_config, "experiment file describing the environment");
  eval_cmd->add_option("--out", eval_out, "directory for traces and metrics");

  auto* report_cmd = app.add_subcommand("report", "tables and plots from experiment outputs");
  std::string report_in;
  std::optional<std::string> report_out;
  report_cmd->add_option("--in", report_in, "directory holding experiment outputs")->required();
  report_cmd->add_option("--out", report_out, "output directory (default <in>/report)");

  auto* config_cmd = app.add_subcommand("config", "print the default experiment file");
  std::string config_env = "hopper";
  config_cmd->add_option("--env", config_env, "hopper | wiper | point_mass")->capture_default_str();

  auto* robot_cmd = app.add_subcommand("robot", "print a robot preset file");
  std::string preset = "hopper";
  robot_cmd->add_option("--preset", preset, "hopper | arm")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    int failed = 0;
    if (*train_cmd) {
      const RunSummary s = run_experiment(train_flags.build());
      print_summary(s);
      failed = s.failed_count();
    } else if (*sweep_cmd) {
      const ExperimentSpec base = sweep_flags.build();
      if (variable == "kp") {
        for (const auto& s : gain_sweep(base, parse_numbers(kp_values, "kp-values"))) {
          print_summary(s);
          failed += s.failed_count();
        }
      } else {
        std::vector<SweepVariable> vars;
        if (variable == "all") {
          vars = {SweepVariable::kHeight, SweepVariable::kFriction, SweepVariable::kStiffness};
        } else {
          vars = {parse_sweep_variable(variable)};
        }
        const SweepResult r = robustness_sweep(base, vars);
        for (const auto& c : r.cells) {
          print_summary(c.summary);
          failed += c.summary.failed_count();
        }
        for (SweepVariable v : vars) {
          fmt::print("{}: variable-gain margin over best alternative {:.3f}\n", to_string(v),
                     r.margin(v));
        }
      }
    } else if (*eval_cmd) {
      const Policy policy = load_checkpoint(checkpoint);
      const ExperimentSpec spec = eval_spec(checkpoint, policy, eval_config);
      const std::string trace_dir = eval_out ? (fs::path(*eval_out) / "traces").string() : "";
      const EvalReport r = evaluate_policy(policy, spec, eval_episodes, eval_seed_value, trace_dir);
      if (eval_out) write_eval_report(r, (fs::path(*eval_out) / "eval.csv").string());
      const auto& m = r.mean;
      const std::string tracking =
          std::isfinite(m.tracking_error) ? fmt::format("{:.5f}", m.tracking_error) : "n/a";
      fmt::print("{} / {}: score {:.3f}, tracking error {}, contact losses {:.2f}, peak force "
                 "{:.2f} N, force diff std {:.4f}\n",
                 policy.env_id, to_string(policy.codec.parametrization), m.score, tracking,
                 r.mean_contact_losses, m.peak_force, m.force_diff_std);
    } else if (*report_cmd) {
      const std::string out = report_out ? *report_out : (fs::path(report_in) / "report").string();
      const ReportFiles f = write_report(report_in, out);
      for (const auto& w : f.written) fmt::print("{}\n", w);
    } else if (*config_cmd) {
      fmt::print("{}", dump_experiment(ExperimentSpec::defaults_for(config_env)));
    } else if (*robot_cmd) {
      if (preset == "hopper") {
        fmt::print("{}", dump_robot(hopper_preset()));
      } else if (preset == "arm") {
        fmt::print("{}", dump_robot(arm_preset()));
      } else {
        throw ConfigError("preset", fmt::format("unknown preset '{}' (hopper | arm)", preset));
      }
    }
    if (strict && failed > 0) {
      fmt::print(stderr, "{} seed(s) failed\n", failed);
      return 1;
    }
  } catch (const vic::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}

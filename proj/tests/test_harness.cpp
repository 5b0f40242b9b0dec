#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "vic/envs/diagnostics.hpp"
#include "vic/error.hpp"
#include "vic/harness/evaluate.hpp"
#include "vic/harness/experiment.hpp"
#include "vic/harness/report.hpp"
#include "vic/harness/sweep.hpp"
#include "vic/io/checkpoint.hpp"
#include "vic/io/csv.hpp"

namespace vic {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vic_test_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec tiny_point_mass(const fs::path& out) {
  ExperimentSpec s = ExperimentSpec::defaults_for("point_mass");
  s.name = "tiny";
  s.seeds = {0, 1};
  s.trainer.episodes = 8;
  s.trainer.hidden = {8, 8};
  s.trainer.batch_size = 16;
  s.trainer.warmup_steps = 50;
  s.trainer.eval_every = 2;
  s.output_dir = out.string();
  return s;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
  }
  return files;
}

TEST(Experiment, RerunIsByteIdentical) {
  const fs::path a = temp_dir("rerun_a"), b = temp_dir("rerun_b");
  ExperimentSpec s = tiny_point_mass(a);
  s.threads = 2;
  run_experiment(s);
  // Same spec, different worker count and output directory.
  s.output_dir = b.string();
  s.threads = 1;
  run_experiment(s);
  auto ta = tree(a), tb = tree(b);
  ta.erase("spec.yaml");
  tb.erase("spec.yaml");
  ASSERT_EQ(ta.size(), tb.size());
  EXPECT_GE(ta.size(), 11u);
  for (const auto& [name, content] : ta) EXPECT_EQ(content, tb[name]) << name;
}

TEST(Experiment, SummaryConsistency) {
  const fs::path out = temp_dir("summary");
  ExperimentSpec s = tiny_point_mass(out);
  s.seeds = {0, 1, 2};
  const RunSummary r = run_experiment(s);
  ASSERT_EQ(r.seeds.size(), 3u);
  int converged = 0;
  for (const auto& seed : r.seeds) {
    EXPECT_EQ(seed.curve.size(), 8u);
    EXPECT_EQ(seed.converged, seed.final_score > r.threshold);
    converged += seed.converged;
  }
  EXPECT_GE(r.converged_fraction, 0.0);
  EXPECT_LE(r.converged_fraction, 1.0);
  EXPECT_DOUBLE_EQ(r.converged_fraction, converged / 3.0);
  EXPECT_DOUBLE_EQ(r.threshold, s.convergence_fraction * r.best_score);

  // The mean curve is the arithmetic mean of the per-seed curves.
  const CsvTable stats = read_csv((out / "curve_stats.csv").string());
  const auto mean = stats.column("score_mean");
  for (int ep = 0; ep < 8; ++ep) {
    double sum = 0.0;
    for (std::uint64_t sd : s.seeds) {
      sum += read_csv((out / ("seed_" + std::to_string(sd)) / "curve.csv").string())
                 .column("score")[ep];
    }
    EXPECT_NEAR(mean[ep], sum / 3.0, 1e-12);
  }
}

TEST(Experiment, AggregationOrderIndependent) {
  const fs::path a = temp_dir("order_a"), b = temp_dir("order_b");
  ExperimentSpec s = tiny_point_mass(a);
  s.seeds = {0, 1, 2};
  const RunSummary x = run_experiment(s);
  s.seeds = {2, 0, 1};
  s.output_dir = b.string();
  const RunSummary y = run_experiment(s);
  EXPECT_EQ(x.mean_final, y.mean_final);
  EXPECT_EQ(x.std_final, y.std_final);
  EXPECT_EQ(x.best_score, y.best_score);
  EXPECT_EQ(x.converged_fraction, y.converged_fraction);
  EXPECT_EQ(read_file(a / "curve_stats.csv"), read_file(b / "curve_stats.csv"));
}

TEST(Experiment, ReuseLoadsIdenticalRun) {
  const fs::path out = temp_dir("reuse");
  ExperimentSpec s = tiny_point_mass(out);
  const RunSummary a = run_experiment(s);
  const auto before = tree(out);
  const RunSummary b = run_experiment(s, true, Reuse::kIfComplete);
  EXPECT_EQ(tree(out), before);
  EXPECT_EQ(a.mean_final, b.mean_final);
  EXPECT_EQ(a.std_final, b.std_final);
  EXPECT_EQ(a.best_score, b.best_score);
  ASSERT_EQ(b.seeds.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(encode_checkpoint(a.seeds[i].best_policy), encode_checkpoint(b.seeds[i].best_policy));
    for (int ep = 0; ep < 8; ++ep) {
      EXPECT_EQ(a.seeds[i].curve[ep].score, b.seeds[i].curve[ep].score);
      EXPECT_EQ(a.seeds[i].curve[ep].train.peak_force, b.seeds[i].curve[ep].train.peak_force);
    }
  }
  // Any change to the spec forces a fresh run.
  s.trainer.actor_lr *= 2.0;
  EXPECT_FALSE(load_run(s).has_value());
}

TEST(Experiment, ConvergenceThresholdShared) {
  RunSummary a, b;
  a.best_score = 100.0;
  b.best_score = 40.0;
  a.seeds.resize(2);
  b.seeds.resize(2);
  a.seeds[0].final_score = 70.0;
  a.seeds[1].final_score = 50.0;
  b.seeds[0].final_score = 61.0;
  b.seeds[1].final_score = 60.0;
  apply_convergence_threshold({&a, &b}, 0.6);
  EXPECT_EQ(a.threshold, 60.0);
  EXPECT_EQ(b.threshold, 60.0);
  EXPECT_EQ(a.converged_fraction, 0.5);
  EXPECT_EQ(b.converged_fraction, 0.5);
  EXPECT_FALSE(b.seeds[1].converged);  // strictly greater
}

TEST(Experiment, MeanStd) {
  auto [m, s] = mean_std({1.0, 3.0, std::nan("")});
  EXPECT_EQ(m, 2.0);
  EXPECT_EQ(s, 1.0);
  std::tie(m, s) = mean_std({});
  EXPECT_TRUE(std::isnan(m));
  std::vector<CurvePoint> c(10);
  for (int i = 0; i < 10; ++i) c[i].eval_score = i % 2 ? i : std::nan("");
  EXPECT_EQ(final_eval_score(c, 2), 8.0);
}

TEST(Experiment, FailedSetupRecorded) {
  const fs::path out = temp_dir("failed");
  ExperimentSpec s = tiny_point_mass(out);
  fs::create_directories(out);
  // A regular file where a seed directory should go makes that seed's I/O fail.
  std::ofstream(out / "seed_1") << "x";
  const RunSummary r = run_experiment(s);
  EXPECT_FALSE(r.seeds[0].failed);
  EXPECT_TRUE(r.seeds[1].failed);
  EXPECT_EQ(r.failed_count(), 1);
  EXPECT_EQ(r.curves.score_mean.size(), 8u);
}

TEST(Evaluate, ReplayAndTraces) {
  const fs::path out = temp_dir("eval");
  const ExperimentSpec s = tiny_point_mass(out);
  const RunSummary r = run_experiment(s);
  const Policy p = load_checkpoint((out / "seed_0" / "best.ckpt").string());
  // The logged best evaluation reproduces exactly from its seed.
  auto env = make_environment(s);
  EXPECT_EQ(run_episode(*env, p, eval_seed(0, 0)).score, r.seeds[0].best_eval_score);

  const EvalReport a = evaluate_policy(p, s, 3, 9, (out / "traces").string());
  const EvalReport b = evaluate_policy(p, s, 3, 9);
  ASSERT_EQ(a.episodes.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(a.episodes[k].score, b.episodes[k].score);
  const CsvTable trace = read_csv((out / "traces" / "episode_0.csv").string());
  EXPECT_EQ(trace.header, trace_header(*env));
  EXPECT_EQ(trace.header.front(), "t");
  EXPECT_EQ(trace.rows.size(), 50u);
  double sum = 0.0;
  for (double v : trace.column("total")) sum += v;
  EXPECT_NEAR(sum, a.episodes[0].score, 1e-9);
  EXPECT_TRUE(std::isnan(a.episodes[0].tracking_error));  // torque: not applicable
  write_eval_report(a, (out / "eval.csv").string());
  EXPECT_EQ(read_csv((out / "eval.csv").string()).rows.size(), 3u);

  ExperimentSpec wrong = s;
  wrong.parametrization = Parametrization::kVariableGainPD;
  EXPECT_THROW(evaluate_policy(p, wrong, 1, 0), MismatchError);
}

TEST(Diagnostics, ContactLossesAndForceSmoothness) {
  EXPECT_EQ(DiagnosticsAccumulator::count_contact_losses({0, 0, 1, 2, 3, 2, 1}), 0);
  EXPECT_EQ(DiagnosticsAccumulator::count_contact_losses({0, 1, 0, 1, 0, 0, 2}), 2);
  EXPECT_EQ(DiagnosticsAccumulator::count_contact_losses({0, 0, 0}), 0);
  EXPECT_EQ(DiagnosticsAccumulator::first_difference_std({1, 2, 3, 4}), 0.0);
  EXPECT_NEAR(DiagnosticsAccumulator::first_difference_std({0, 1, 0, 1}), std::sqrt(8.0 / 9.0),
              1e-15);
  EXPECT_EQ(DiagnosticsAccumulator::first_difference_std({5.0}), 0.0);
}

TEST(Sweep, Names) {
  for (auto v : {SweepVariable::kHeight, SweepVariable::kFriction, SweepVariable::kStiffness}) {
    EXPECT_EQ(parse_sweep_variable(to_string(v)), v);
  }
  EXPECT_THROW(parse_sweep_variable("mass"), Error);
}

TEST(Sweep, RandomizesExactlyOneVariable) {
  const ExperimentSpec base = ExperimentSpec::defaults_for("wiper");
  for (auto v : {SweepVariable::kHeight, SweepVariable::kFriction, SweepVariable::kStiffness}) {
    const ExperimentSpec s = robustness_spec(base, v, Parametrization::kFixedGainPD);
    const auto& u = s.wiper.uncertainty;
    EXPECT_EQ(u.table_height_active + u.friction_active + u.stiffness_active, 1);
    EXPECT_FALSE(u.ground_height_active);
    EXPECT_EQ(s.parametrization, Parametrization::kFixedGainPD);
  }
  const ExperimentSpec h = robustness_spec(ExperimentSpec::defaults_for("hopper"),
                                           SweepVariable::kHeight, Parametrization::kTorque);
  EXPECT_TRUE(h.hopper.uncertainty.ground_height_active);
  EXPECT_THROW(robustness_spec(ExperimentSpec::defaults_for("hopper"), SweepVariable::kFriction,
                               Parametrization::kTorque),
               Error);
}

TEST(Sweep, FrictionIsolationAndUniformity) {
  const ExperimentSpec s = robustness_spec(ExperimentSpec::defaults_for("wiper"),
                                           SweepVariable::kFriction, Parametrization::kVariableGainPD);
  auto env = make_environment(s);
  std::vector<double> mu;
  const int n = 2000;
  for (int e = 0; e < n; ++e) {
    env->reset(episode_seed(3, e));
    EXPECT_EQ(env->contact().surface_height, 0.9);
    EXPECT_EQ(env->contact().normal_stiffness, 275.0);
    mu.push_back(env->contact().coulomb_friction);
  }
  // Kolmogorov-Smirnov distance to U(0, 1); 1.63 / sqrt(n) is the 1% critical value.
  std::sort(mu.begin(), mu.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    d = std::max({d, (i + 1.0) / n - mu[i], mu[i] - static_cast<double>(i) / n});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(static_cast<double>(n)));
  EXPECT_GE(mu.front(), 0.0);
  EXPECT_LE(mu.back(), 1.0);
}

TEST(Sweep, GridAndGainTable) {
  const fs::path out = temp_dir("grid");
  ExperimentSpec base = ExperimentSpec::defaults_for("wiper");
  base.seeds = {0};
  base.trainer.episodes = 2;
  base.trainer.hidden = {4};
  base.trainer.batch_size = 8;
  base.trainer.warmup_steps = 10;
  base.trainer.eval_every = 1;
  base.wiper.sim.horizon = 0.05;
  base.output_dir = out.string();
  const SweepResult r = robustness_sweep(
      base, {SweepVariable::kHeight, SweepVariable::kFriction, SweepVariable::kStiffness});
  EXPECT_EQ(r.cells.size(), 9u);
  EXPECT_EQ(read_csv((out / "robustness.csv").string()).rows.size(), 9u);
  EXPECT_TRUE(fs::exists(out / "friction" / "torque" / "summary.csv"));
  const auto& cell = r.cell(SweepVariable::kFriction, Parametrization::kTorque);
  EXPECT_TRUE(cell.summary.spec.wiper.uncertainty.friction_active);
  EXPECT_FALSE(cell.summary.spec.wiper.uncertainty.stiffness_active);

  ExperimentSpec g = tiny_point_mass(out / "gains");
  g.parametrization = Parametrization::kFixedGainPD;
  g.seeds = {0};
  const auto runs = gain_sweep(g, {1, 3, 5, 8, 10});
  EXPECT_EQ(runs.size(), 5u);
  const CsvTable t = read_csv((out / "gains" / "gain_sweep.csv").string());
  EXPECT_EQ(t.column("kp"), (std::vector<double>{1, 3, 5, 8, 10}));
}

TEST(Report, Artifacts) {
  const fs::path out = temp_dir("report");
  ExperimentSpec s = tiny_point_mass(out / "runs" / "one");
  s.seeds = {4};
  run_experiment(s);
  ExperimentSpec t = tiny_point_mass(out / "runs" / "three");
  t.seeds = {0, 1, 2};
  run_experiment(t);
  const ReportFiles f = write_report((out / "runs").string(), (out / "report").string());
  EXPECT_EQ(f.experiments.size(), 2u);
  const CsvTable one = read_csv((out / "runs" / "one" / "curve_stats.csv").string());
  for (double sd : one.column("score_std")) EXPECT_EQ(sd, 0.0);
  for (double sd : one.column("eval_std")) EXPECT_TRUE(std::isnan(sd) || sd == 0.0);
  const std::string svg = read_file(out / "report" / "final_scores.svg");
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 4u);
  EXPECT_EQ(read_csv((out / "report" / "experiments.csv").string()).rows.size(), 2u);
  EXPECT_TRUE(fs::exists(out / "report" / "learning_curves.svg"));
  const std::string first = read_file(out / "report" / "learning_curves.svg");
  write_report((out / "runs").string(), (out / "report").string());
  EXPECT_EQ(read_file(out / "report" / "learning_curves.svg"), first);
}

}  // namespace
}  // namespace vic

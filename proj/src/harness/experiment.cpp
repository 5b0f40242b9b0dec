#include "vic/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "vic/error.hpp"
#include "vic/io/checkpoint.hpp"
#include "vic/io/config.hpp"
#include "vic/io/csv.hpp"

namespace fs = std::filesystem;

namespace vic {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string seed_dir(const ExperimentSpec& spec, std::uint64_t seed) {
  return (fs::path(spec.output_dir) / fmt::format("seed_{}", seed)).string();
}

void write_seed_files(const ExperimentSpec& spec, const SeedResult& r, const Policy& final_policy) {
  const std::string dir = seed_dir(spec, r.seed);
  fs::create_directories(dir);
  CsvWriter curve(dir + "/curve.csv", {"episode", "score", "eval_score"});
  CsvWriter diag(dir + "/diagnostics.csv",
                 {"episode", "peak_force", "contact_losses", "tracking_error", "force_diff_std",
                  "mean_kp"});
  for (const auto& p : r.curve) {
    curve.row({static_cast<double>(p.episode), p.score, p.eval_score});
    diag.row({static_cast<double>(p.episode), p.train.peak_force,
              static_cast<double>(p.train.contact_losses), p.train.tracking_error,
              p.train.force_diff_std, p.train.mean_kp});
  }
  if (!r.failed) {
    save_checkpoint(final_policy, dir + "/final.ckpt");
    save_checkpoint(r.best_policy, dir + "/best.ckpt");
  }
}

SeedResult run_seed(const ExperimentSpec& spec, std::uint64_t seed, bool write_files) {
  auto env = make_environment(spec);
  TrainResult t = train(*env, spec.trainer, seed);
  SeedResult r;
  r.seed = seed;
  r.failed = t.failed;
  r.failure = t.failure;
  r.env_steps = t.env_steps;
  r.curve = std::move(t.curve);
  for (int ep = static_cast<int>(r.curve.size()); ep < spec.trainer.episodes; ++ep) {
    CurvePoint pad;
    pad.episode = ep;
    pad.score = kNaN;
    pad.eval_score = kNaN;
    pad.train.tracking_error = kNaN;
    pad.train.mean_kp = kNaN;
    r.curve.push_back(pad);
  }
  r.final_score = final_eval_score(r.curve, spec.final_window);
  r.best_eval_score = std::isfinite(t.best_eval_score) ? t.best_eval_score : kNaN;
  r.best_policy = std::move(t.best_policy);
  if (write_files) write_seed_files(spec, r, t.policy);
  return r;
}

}  // namespace

int RunSummary::failed_count() const {
  return static_cast<int>(std::count_if(seeds.begin(), seeds.end(),
                                        [](const SeedResult& s) { return s.failed; }));
}

int RunSummary::best_seed() const {
  int best = -1;
  for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
    if (!std::isfinite(seeds[i].best_eval_score)) continue;
    if (best < 0 || seeds[i].best_eval_score > seeds[best].best_eval_score) best = i;
  }
  return best;
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  // Sorted summation makes the result independent of the seed order.
  std::vector<double> v;
  for (double x : values) {
    if (std::isfinite(x)) v.push_back(x);
  }
  if (v.empty()) return {kNaN, kNaN};
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  std::vector<double> sq;
  sq.reserve(v.size());
  for (double x : v) sq.push_back((x - mean) * (x - mean));
  std::sort(sq.begin(), sq.end());
  double var = 0.0;
  for (double x : sq) var += x;
  return {mean, std::sqrt(var / static_cast<double>(v.size()))};
}

double final_eval_score(const std::vector<CurvePoint>& curve, int window) {
  double sum = 0.0;
  int n = 0;
  for (auto it = curve.rbegin(); it != curve.rend() && n < window; ++it) {
    if (std::isfinite(it->eval_score)) {
      sum += it->eval_score;
      ++n;
    }
  }
  return n > 0 ? sum / n : kNaN;
}

CurveStats aggregate_curves(const std::vector<SeedResult>& seeds, int episodes) {
  CurveStats c;
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<double> scores, evals;
    for (const auto& s : seeds) {
      if (ep < static_cast<int>(s.curve.size())) {
        scores.push_back(s.curve[ep].score);
        evals.push_back(s.curve[ep].eval_score);
      }
    }
    const auto [sm, ss] = mean_std(scores);
    const auto [em, es] = mean_std(evals);
    c.score_mean.push_back(sm);
    c.score_std.push_back(ss);
    c.eval_mean.push_back(em);
    c.eval_std.push_back(es);
    c.contributing.push_back(static_cast<int>(
        std::count_if(scores.begin(), scores.end(), [](double v) { return std::isfinite(v); })));
  }
  return c;
}

void apply_convergence_threshold(std::vector<RunSummary*> group, double fraction) {
  double best = -std::numeric_limits<double>::infinity();
  for (const RunSummary* s : group) {
    if (std::isfinite(s->best_score)) best = std::max(best, s->best_score);
  }
  const double threshold = std::isfinite(best) ? fraction * best : kNaN;
  for (RunSummary* s : group) {
    s->threshold = threshold;
    int converged = 0;
    for (auto& seed : s->seeds) {
      seed.converged = !seed.failed && std::isfinite(seed.final_score) &&
                       std::isfinite(threshold) && seed.final_score > threshold;
      converged += seed.converged ? 1 : 0;
    }
    s->converged_fraction =
        s->seeds.empty() ? 0.0 : static_cast<double>(converged) / s->seeds.size();
  }
}

void write_summary(const RunSummary& s) {
  const std::string dir = s.spec.output_dir;
  fs::create_directories(dir);
  {
    CsvWriter w(dir + "/summary.csv", {"seed", "final_score", "best_eval_score", "converged",
                                       "failed", "env_steps", "threshold"});
    for (const auto& r : s.seeds) {
      w.row(std::vector<std::string>{
          std::to_string(r.seed), format_double(r.final_score), format_double(r.best_eval_score),
          r.converged ? "1" : "0", r.failed ? "1" : "0", std::to_string(r.env_steps),
          format_double(s.threshold)});
    }
  }
  {
    CsvWriter w(dir + "/aggregate.csv",
                {"name", "env", "parametrization", "kp", "tracking_k", "seeds", "failed",
                 "mean_final", "std_final", "best_score", "threshold", "converged_fraction"});
    w.row(std::vector<std::string>{
        s.spec.name, s.spec.env, std::string(to_string(s.spec.parametrization)),
        format_double(s.spec.controller.kp),
        format_double(s.spec.tracking.enabled ? s.spec.tracking.k : 0.0),
        std::to_string(s.seeds.size()), std::to_string(s.failed_count()),
        format_double(s.mean_final), format_double(s.std_final), format_double(s.best_score),
        format_double(s.threshold), format_double(s.converged_fraction)});
  }
}

namespace {

void finish_summary(RunSummary& summary) {
  const ExperimentSpec& spec = summary.spec;
  summary.curves = aggregate_curves(summary.seeds, spec.trainer.episodes);
  std::vector<double> finals;
  summary.best_score = kNaN;
  for (const auto& r : summary.seeds) {
    if (!r.failed) finals.push_back(r.final_score);
    if (std::isfinite(r.best_eval_score) &&
        !(r.best_eval_score <= summary.best_score)) {
      summary.best_score = r.best_eval_score;
    }
  }
  std::tie(summary.mean_final, summary.std_final) = mean_std(finals);
  apply_convergence_threshold({&summary}, spec.convergence_fraction);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool parse_flag(const std::string& cell) { return cell == "1"; }

}  // namespace

std::optional<RunSummary> load_run(const ExperimentSpec& spec) {
  const fs::path dir(spec.output_dir);
  for (const char* f : {"spec.yaml", "summary.csv", "aggregate.csv", "curve_stats.csv"}) {
    if (!fs::is_regular_file(dir / f)) return std::nullopt;
  }
  if (read_text(dir / "spec.yaml") != dump_experiment(spec)) return std::nullopt;
  try {
    const CsvTable table = read_csv((dir / "summary.csv").string());
    if (table.rows.size() != spec.seeds.size()) return std::nullopt;
    const auto seed_col = table.column_index("seed");
    const auto failed_col = table.column_index("failed");
    const auto steps_col = table.column_index("env_steps");
    const auto finals = table.column("final_score");
    const auto bests = table.column("best_eval_score");

    RunSummary summary;
    summary.spec = spec;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
      const auto& row = table.rows[i];
      if (row[seed_col] != std::to_string(spec.seeds[i])) return std::nullopt;
      SeedResult r;
      r.seed = spec.seeds[i];
      r.failed = parse_flag(row[failed_col]);
      if (r.failed) r.failure = "failed in the loaded run";
      r.env_steps = std::stol(row[steps_col]);
      r.final_score = finals[i];
      r.best_eval_score = bests[i];
      const fs::path sd = seed_dir(spec, r.seed);
      const CsvTable curve = read_csv((sd / "curve.csv").string());
      const CsvTable diag = read_csv((sd / "diagnostics.csv").string());
      if (curve.rows.size() != static_cast<std::size_t>(spec.trainer.episodes) ||
          diag.rows.size() != curve.rows.size()) {
        return std::nullopt;
      }
      const auto score = curve.column("score"), eval = curve.column("eval_score");
      const auto peak = diag.column("peak_force"), losses = diag.column("contact_losses");
      const auto track = diag.column("tracking_error"), fds = diag.column("force_diff_std");
      const auto kp = diag.column("mean_kp");
      for (std::size_t k = 0; k < score.size(); ++k) {
        CurvePoint p;
        p.episode = static_cast<int>(k);
        p.score = score[k];
        p.eval_score = eval[k];
        p.train.score = score[k];
        p.train.peak_force = peak[k];
        p.train.contact_losses = static_cast<int>(losses[k]);
        p.train.tracking_error = track[k];
        p.train.force_diff_std = fds[k];
        p.train.mean_kp = kp[k];
        r.curve.push_back(p);
      }
      if (!r.failed) r.best_policy = load_checkpoint((sd / "best.ckpt").string());
      summary.seeds.push_back(std::move(r));
    }
    finish_summary(summary);
    return summary;
  } catch (const Error&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

RunSummary run_experiment(const ExperimentSpec& spec, bool write_files, Reuse reuse) {
  spec.validate();
  if (reuse == Reuse::kIfComplete) {
    if (auto loaded = load_run(spec)) return *std::move(loaded);
  }
  RunSummary summary;
  summary.spec = spec;
  const int n = static_cast<int>(spec.seeds.size());
  summary.seeds.resize(n);
  if (write_files) {
    fs::create_directories(spec.output_dir);
    save_experiment(spec, spec.output_dir + "/spec.yaml");
  }

  int workers = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        summary.seeds[i] = run_seed(spec, spec.seeds[i], write_files);
      } catch (const std::exception& e) {
        // Setup or I/O failures are recorded against the seed like a training abort.
        SeedResult r;
        r.seed = spec.seeds[i];
        r.failed = true;
        r.failure = e.what();
        r.final_score = kNaN;
        r.best_eval_score = kNaN;
        summary.seeds[i] = std::move(r);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  finish_summary(summary);

  if (write_files) {
    write_summary(summary);
    CsvWriter w(spec.output_dir + "/curve_stats.csv",
                {"episode", "score_mean", "score_std", "eval_mean", "eval_std", "seeds"});
    for (int ep = 0; ep < spec.trainer.episodes; ++ep) {
      w.row({static_cast<double>(ep), summary.curves.score_mean[ep], summary.curves.score_std[ep],
             summary.curves.eval_mean[ep], summary.curves.eval_std[ep],
             static_cast<double>(summary.curves.contributing[ep])});
    }
    const int best = summary.best_seed();
    if (best >= 0) save_checkpoint(summary.seeds[best].best_policy, spec.output_dir + "/best.ckpt");
  }
  return summary;
}

}  // namespace vic

#include "vic/harness/evaluate.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include <fmt/format.h>

#include "vic/io/checkpoint.hpp"
#include "vic/io/csv.hpp"

namespace fs = std::filesystem;

namespace vic {

std::vector<std::string> trace_header(const Environment& env) {
  const int dof = env.model().dof();
  const int n = env.model().n_joints();
  std::vector<std::string> h{"t"};
  for (int i = 0; i < dof; ++i) h.push_back(fmt::format("q{}", i));
  for (int i = 0; i < dof; ++i) h.push_back(fmt::format("qdot{}", i));
  for (int i = 0; i < n; ++i) h.push_back(fmt::format("tau{}", i));
  for (int i = 0; i < n; ++i) h.push_back(fmt::format("q_des{}", i));
  for (int i = 0; i < n; ++i) h.push_back(fmt::format("kp{}", i));
  h.push_back("fn");
  for (const auto& name : env.reward_names()) h.push_back(name);
  h.push_back("total");
  return h;
}

EvalReport evaluate_policy(const Policy& policy, const ExperimentSpec& spec, int n_episodes,
                           std::uint64_t seed, const std::string& trace_dir) {
  auto env = make_environment(spec);
  check_compatible(policy, env->id(), env->codec(), env->observation_dim());
  if (!trace_dir.empty()) fs::create_directories(trace_dir);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const int n = env->model().n_joints();

  EvalReport report;
  for (int k = 0; k < n_episodes; ++k) {
    const std::uint64_t s = eval_seed(seed, k);
    std::unique_ptr<CsvWriter> trace;
    if (!trace_dir.empty()) {
      trace = std::make_unique<CsvWriter>(
          (fs::path(trace_dir) / fmt::format("episode_{}.csv", k)).string(), trace_header(*env));
    }
    StepObserver observer;
    if (trace) {
      observer = [&](const Eigen::VectorXd&, const StepResult& r) {
        const EnvState& st = env->state();
        std::vector<double> row{st.time};
        for (int i = 0; i < st.q.size(); ++i) row.push_back(st.q[i]);
        for (int i = 0; i < st.qdot.size(); ++i) row.push_back(st.qdot[i]);
        for (int i = 0; i < n; ++i) row.push_back(r.info.torque[i]);
        for (int i = 0; i < n; ++i) row.push_back(r.info.q_des.size() ? r.info.q_des[i] : nan);
        for (int i = 0; i < n; ++i) row.push_back(r.info.kp.size() ? r.info.kp[i] : nan);
        double fn = 0.0;
        for (const auto& c : st.contacts) fn += c.normal_force;
        row.push_back(fn);
        for (const auto& [name, value] : r.reward.terms()) row.push_back(value);
        row.push_back(r.reward.total());
        trace->row(row);
      };
    }
    report.episode_seeds.push_back(s);
    report.episodes.push_back(run_episode(*env, policy, s, observer));
  }

  EpisodeDiagnostics& m = report.mean;
  const double count = std::max(1, n_episodes);
  m = EpisodeDiagnostics{};
  for (const auto& e : report.episodes) {
    m.score += e.score / count;
    m.steps += e.steps;
    m.diverged = m.diverged || e.diverged;
    m.peak_force = std::max(m.peak_force, e.peak_force);
    m.tracking_error += e.tracking_error / count;
    report.mean_contact_losses += e.contact_losses / count;
    m.force_diff_std += e.force_diff_std / count;
    m.mean_kp += e.mean_kp / count;
  }
  m.steps = n_episodes > 0 ? m.steps / n_episodes : 0;
  m.contact_losses = static_cast<int>(report.mean_contact_losses);
  return report;
}

void write_eval_report(const EvalReport& report, const std::string& path) {
  CsvWriter w(path, {"episode", "seed", "score", "steps", "diverged", "peak_force",
                     "tracking_error", "contact_losses", "force_diff_std", "mean_kp"});
  for (std::size_t k = 0; k < report.episodes.size(); ++k) {
    const auto& e = report.episodes[k];
    w.row(std::vector<std::string>{
        std::to_string(k), std::to_string(report.episode_seeds[k]), format_double(e.score),
        std::to_string(e.steps), e.diverged ? "1" : "0", format_double(e.peak_force),
        format_double(e.tracking_error), std::to_string(e.contact_losses),
        format_double(e.force_diff_std), format_double(e.mean_kp)});
  }
}

}  // namespace vic

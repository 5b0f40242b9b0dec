#include "vic/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <fmt/format.h>

#include "vic/error.hpp"
#include "vic/io/csv.hpp"
#include "vic/io/svg.hpp"

namespace fs = std::filesystem;

namespace vic {
namespace {

std::vector<fs::path> find_files(const fs::path& root, const std::string& name) {
  std::vector<fs::path> out;
  if (fs::is_regular_file(root / name)) out.push_back(root / name);
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == name &&
        entry.path().parent_path() != root) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string label_for(const fs::path& dir, const fs::path& root) {
  const std::string rel = fs::relative(dir, root).generic_string();
  return rel == "." ? dir.filename().string() : rel;
}

}  // namespace

ReportFiles write_report(const std::string& in_dir, const std::string& out_dir) {
  const fs::path root(in_dir);
  if (!fs::is_directory(root)) throw FormatError(fmt::format("{} is not a directory", in_dir));
  fs::create_directories(out_dir);
  ReportFiles files;

  const auto aggregates = find_files(root, "aggregate.csv");
  if (aggregates.empty()) throw FormatError(fmt::format("no experiment outputs under {}", in_dir));

  SvgChart curves("Evaluation score (mean +- std over seeds)", "episode", "score");
  SvgChart finals("Final score per seed", "experiment index", "final score");
  std::unique_ptr<CsvWriter> table;
  int index = 0;
  for (const auto& agg : aggregates) {
    const fs::path dir = agg.parent_path();
    const std::string label = label_for(dir, root);
    files.experiments.push_back(dir.string());
    const CsvTable a = read_csv(agg.string());
    if (!table) {
      auto header = a.header;
      header.insert(header.begin(), {"index", "path"});
      table = std::make_unique<CsvWriter>((fs::path(out_dir) / "experiments.csv").string(), header);
    }
    for (auto row : a.rows) {
      row.insert(row.begin(), {std::to_string(index), label});
      table->row(row);
    }

    if (fs::exists(dir / "curve_stats.csv")) {
      const CsvTable c = read_csv((dir / "curve_stats.csv").string());
      std::vector<double> x, y, band;
      const auto ep = c.column("episode"), mean = c.column("eval_mean"), sd = c.column("eval_std");
      for (std::size_t i = 0; i < ep.size(); ++i) {
        if (!std::isfinite(mean[i])) continue;
        x.push_back(ep[i]);
        y.push_back(mean[i]);
        band.push_back(sd[i]);
      }
      curves.add_line(label, x, y, band);
    }
    if (fs::exists(dir / "summary.csv")) {
      const auto f = read_csv((dir / "summary.csv").string()).column("final_score");
      finals.add_points(label, std::vector<double>(f.size(), static_cast<double>(index)), f);
    }
    ++index;
  }
  files.written.push_back((fs::path(out_dir) / "experiments.csv").string());
  curves.write((fs::path(out_dir) / "learning_curves.svg").string());
  files.written.push_back((fs::path(out_dir) / "learning_curves.svg").string());
  finals.write((fs::path(out_dir) / "final_scores.svg").string());
  files.written.push_back((fs::path(out_dir) / "final_scores.svg").string());

  int k = 0;
  for (const auto& path : find_files(root, "robustness.csv")) {
    const CsvTable t = read_csv(path.string());
    SvgChart bars("Robustness: mean final score by randomized variable", "randomized variable",
                  "final score");
    const auto mean = t.column("mean_final"), sd = t.column("std_final");
    const auto vi = t.column_index("variable"), pi = t.column_index("parametrization");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      bars.add_bar(t.rows[i][vi], t.rows[i][pi], mean[i], std::isfinite(sd[i]) ? sd[i] : 0.0);
    }
    const std::string name = k == 0 ? "robustness.svg" : fmt::format("robustness_{}.svg", k);
    bars.write((fs::path(out_dir) / name).string());
    files.written.push_back((fs::path(out_dir) / name).string());
    ++k;
  }
  k = 0;
  for (const auto& path : find_files(root, "gain_sweep.csv")) {
    const CsvTable t = read_csv(path.string());
    SvgChart chart("Fixed-gain final score vs kp", "kp", "final score");
    chart.add_line("fixed_pd", t.column("kp"), t.column("mean_final"), t.column("std_final"));
    chart.add_points("fixed_pd mean", t.column("kp"), t.column("mean_final"));
    const std::string name = k == 0 ? "gain_sweep.svg" : fmt::format("gain_sweep_{}.svg", k);
    chart.write((fs::path(out_dir) / name).string());
    files.written.push_back((fs::path(out_dir) / name).string());
    ++k;
  }
  return files;
}

}  // namespace vic

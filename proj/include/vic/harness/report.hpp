#pragma once

#include <string>
#include <vector>

namespace vic {

struct ReportFiles {
  std::vector<std::string> experiments;  // directories that held an aggregate.csv
  std::vector<std::string> written;      // artifacts produced
};

/// Scans `in_dir` for experiment outputs and writes comparison artifacts to `out_dir`:
/// experiments.csv, learning_curves.svg (mean +- std evaluation curves),
/// final_scores.svg (one point per seed), and, when present, robustness.svg and
/// gain_sweep.svg. Directories are visited in sorted order so output is reproducible.
ReportFiles write_report(const std::string& in_dir, const std::string& out_dir);

}  // namespace vic

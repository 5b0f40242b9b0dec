#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vic/dynamics/robot_model.hpp"
#include "vic/dynamics/simulator.hpp"

namespace vic {

/// Shortest decimal form that parses back to the same double; "nan", "inf", "-inf".
std::string format_double(double v);

/// Writes a CSV file row by row. Numbers use `format_double`, so output is
/// reproducible byte for byte.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_; }

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws FormatError when absent.
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Plain comma-separated reader (no quoting).
CsvTable read_csv(const std::string& path);

/// Per-physics-step simulator samples: t,q...,qdot...,tau...,fn,ft.
class TrajectoryRecorder {
 public:
  explicit TrajectoryRecorder(const RobotModel& model);

  void record(const EnvState& state, const Eigen::VectorXd& torque);
  std::vector<std::string> header() const;
  void write(const std::string& path) const;
  std::size_t size() const { return rows_.size(); }

 private:
  int dof_;
  int n_joints_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace vic

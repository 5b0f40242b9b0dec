#include "vic/io/csv.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "vic/error.hpp"

namespace vic {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), path_(path), columns_(header.size()) {
  if (!out_) throw FormatError(fmt::format("cannot open {} for writing", path));
  out_ << fmt::format("{}\n", fmt::join(header, ","));
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw DimensionMismatch(fmt::format("{}: row has {} cells, header has {}", path_,
                                        cells.size(), columns_));
  }
  out_ << fmt::format("{}\n", fmt::join(cells, ","));
  if (!out_) throw FormatError(fmt::format("write to {} failed", path_));
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw FormatError(fmt::format("csv has no column '{}'", name));
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(std::strtod(r.at(c).c_str(), nullptr));
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("cannot open {}", path));
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(fmt::format("{} is empty", path));
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) {
      throw FormatError(fmt::format("{}: row {} has {} cells, header has {}", path,
                                    t.rows.size() + 1, cells.size(), t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

TrajectoryRecorder::TrajectoryRecorder(const RobotModel& model)
    : dof_(model.dof()), n_joints_(model.n_joints()) {}

void TrajectoryRecorder::record(const EnvState& state, const Eigen::VectorXd& torque) {
  if (state.q.size() != dof_ || torque.size() != n_joints_) {
    throw DimensionMismatch("trajectory sample does not match the model");
  }
  std::vector<double> r;
  r.reserve(1 + 2 * dof_ + n_joints_ + 2);
  r.push_back(state.time);
  for (int i = 0; i < dof_; ++i) r.push_back(state.q[i]);
  for (int i = 0; i < dof_; ++i) r.push_back(state.qdot[i]);
  for (int i = 0; i < n_joints_; ++i) r.push_back(torque[i]);
  double fn = 0.0;
  double ft = 0.0;
  for (const auto& c : state.contacts) {
    fn += c.normal_force;
    ft += c.tangential_force;
  }
  r.push_back(fn);
  r.push_back(ft);
  rows_.push_back(std::move(r));
}

std::vector<std::string> TrajectoryRecorder::header() const {
  std::vector<std::string> h{"t"};
  for (int i = 0; i < dof_; ++i) h.push_back(fmt::format("q{}", i));
  for (int i = 0; i < dof_; ++i) h.push_back(fmt::format("qdot{}", i));
  for (int i = 0; i < n_joints_; ++i) h.push_back(fmt::format("tau{}", i));
  h.push_back("fn");
  h.push_back("ft");
  return h;
}

void TrajectoryRecorder::write(const std::string& path) const {
  CsvWriter w(path, header());
  for (const auto& r : rows_) w.row(r);
}

}  // namespace vic

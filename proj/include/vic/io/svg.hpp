#pragma once

#include <string>
#include <vector>

namespace vic {

/// Minimal static SVG chart: line series with optional +-band, scatter points and
/// labelled bars on one pair of linear axes.
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::string& label, const std::vector<double>& x,
                const std::vector<double>& y, const std::vector<double>& band = {});
  void add_points(const std::string& label, const std::vector<double>& x,
                  const std::vector<double>& y);
  /// Bars are laid out left to right at integer x positions in insertion order.
  void add_bar(const std::string& category, const std::string& label, double value,
               double error = 0.0);

  std::string render() const;
  void write(const std::string& path) const;

 private:
  struct Series {
    std::string label;
    std::vector<double> x, y, band;
    bool points = false;
  };
  struct Bar {
    std::string category, label;
    double value = 0.0, error = 0.0;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<Bar> bars_;
};

}  // namespace vic

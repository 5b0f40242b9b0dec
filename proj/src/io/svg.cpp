#include "vic/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {
namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

struct Bounds {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::add_line(const std::string& label, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<double>& band) {
  series_.push_back({label, x, y, band, false});
}

void SvgChart::add_points(const std::string& label, const std::vector<double>& x,
                          const std::vector<double>& y) {
  series_.push_back({label, x, y, {}, true});
}

void SvgChart::add_bar(const std::string& category, const std::string& label, double value,
                       double error) {
  bars_.push_back({category, label, value, error});
}

std::string SvgChart::render() const {
  Bounds bx, by;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      bx.add(s.x[i]);
      const double b = i < s.band.size() && std::isfinite(s.band[i]) ? s.band[i] : 0.0;
      by.add(s.y[i] - b);
      by.add(s.y[i] + b);
    }
  }
  std::vector<std::string> categories, labels;
  for (const auto& b : bars_) {
    if (std::find(categories.begin(), categories.end(), b.category) == categories.end()) {
      categories.push_back(b.category);
    }
    if (std::find(labels.begin(), labels.end(), b.label) == labels.end()) labels.push_back(b.label);
    by.add(b.value - b.error);
    by.add(b.value + b.error);
    by.add(0.0);
  }
  if (!bars_.empty()) {
    bx.lo = -0.5;
    bx.hi = static_cast<double>(categories.size()) - 0.5;
  }
  bx.finish();
  by.finish();
  const double pad = 0.05 * (by.hi - by.lo);
  const double y_lo = by.lo - pad, y_hi = by.hi + pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double v) { return kLeft + (v - bx.lo) / (bx.hi - bx.lo) * pw; };
  auto Y = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * ph; };

  std::string o = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  o += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  o += fmt::format("<text x=\"{}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                   num(kLeft + pw / 2), esc(title_));
  o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                   "stroke=\"black\"/>\n",
                   num(kLeft), num(kTop), num(pw), num(ph));
  for (int i = 0; i <= 5; ++i) {
    const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
    o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n",
                     num(kLeft - 6), num(Y(yv) + 4), yv);
    o += fmt::format("<line x1=\"{}\" x2=\"{}\" y1=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
                     num(kLeft), num(kLeft + pw), num(Y(yv)), num(Y(yv)));
  }
  if (bars_.empty()) {
    for (int i = 0; i <= 5; ++i) {
      const double xv = bx.lo + (bx.hi - bx.lo) * i / 5.0;
      o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n",
                       num(X(xv)), num(kTop + ph + 16), xv);
    }
  } else {
    for (std::size_t c = 0; c < categories.size(); ++c) {
      o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       num(X(static_cast<double>(c))), num(kTop + ph + 16), esc(categories[c]));
    }
  }
  o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                   num(kLeft + pw / 2), num(kHeight - 18), esc(x_label_));
  o += fmt::format(
      "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
      num(kTop + ph / 2), num(kTop + ph / 2), esc(y_label_));

  std::vector<std::string> legend;
  for (std::size_t k = 0; k < series_.size(); ++k) {
    const auto& s = series_[k];
    const char* color = kPalette[k % 10];
    legend.push_back(s.label);
    if (s.points) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        o += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"{}\"/>\n", num(X(s.x[i])),
                         num(Y(s.y[i])), color);
      }
      continue;
    }
    if (!s.band.empty()) {
      std::string upper, lower;
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        const double b = i < s.band.size() && std::isfinite(s.band[i]) ? s.band[i] : 0.0;
        upper += fmt::format("{},{} ", num(X(s.x[i])), num(Y(s.y[i] + b)));
        lower = fmt::format("{},{} ", num(X(s.x[i])), num(Y(s.y[i] - b))) + lower;
      }
      o += fmt::format("<polygon points=\"{}{}\" fill=\"{}\" fill-opacity=\"0.2\" stroke=\"none\"/>\n",
                       upper, lower, color);
    }
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      pts += fmt::format("{},{} ", num(X(s.x[i])), num(Y(s.y[i])));
    }
    o += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                     pts, color);
  }

  if (!bars_.empty()) {
    const double slot = pw / static_cast<double>(categories.size());
    const double bw = 0.8 * slot / static_cast<double>(labels.size());
    for (const auto& b : bars_) {
      const auto c = std::find(categories.begin(), categories.end(), b.category) - categories.begin();
      const auto l = std::find(labels.begin(), labels.end(), b.label) - labels.begin();
      const double x0 = X(static_cast<double>(c)) - 0.4 * slot + l * bw;
      const double y0 = Y(std::max(0.0, b.value)), y1 = Y(std::min(0.0, b.value));
      o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                       num(x0), num(y0), num(bw * 0.9), num(y1 - y0), kPalette[l % 10]);
      if (b.error > 0.0) {
        const double xc = x0 + bw * 0.45;
        o += fmt::format("<line x1=\"{}\" x2=\"{}\" y1=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
                         num(xc), num(xc), num(Y(b.value - b.error)), num(Y(b.value + b.error)));
      }
    }
    legend = labels;
  }
  for (std::size_t k = 0; k < legend.size(); ++k) {
    const double ly = kTop + 10 + 18 * static_cast<double>(k);
    o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
                     num(kLeft + pw + 12), num(ly - 10), kPalette[k % 10]);
    o += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(kLeft + pw + 30), num(ly),
                     esc(legend[k]));
  }
  o += "</svg>\n";
  return o;
}

void SvgChart::write(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError(fmt::format("cannot open {} for writing", path));
  out << render();
}

}  // namespace vic

#include "vic/envs/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace vic {

void DiagnosticsAccumulator::add(const StepResult& r) {
  d_.score += r.reward.total();
  ++d_.steps;
  d_.diverged = d_.diverged || r.info.diverged;
  d_.peak_force = std::max(d_.peak_force, r.info.peak_force);
  if (std::isfinite(r.info.tracking_error)) {
    tracking_sum_ += r.info.tracking_error;
    ++tracking_count_;
  }
  if (r.info.kp.size() > 0) {
    kp_sum_ += r.info.kp.mean();
    ++kp_count_;
  }
  force_.insert(force_.end(), r.info.tip_forces.begin(), r.info.tip_forces.end());
}

EpisodeDiagnostics DiagnosticsAccumulator::finish() const {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EpisodeDiagnostics d = d_;
  d.tracking_error = tracking_count_ > 0 ? tracking_sum_ / tracking_count_ : nan;
  d.mean_kp = kp_count_ > 0 ? kp_sum_ / kp_count_ : nan;
  d.contact_losses = count_contact_losses(force_);
  d.force_diff_std = first_difference_std(force_);
  return d;
}

int DiagnosticsAccumulator::count_contact_losses(const std::vector<double>& force) {
  int losses = 0;
  bool touched = false;
  bool in_contact = false;
  for (double f : force) {
    const bool now = f > 0.0;
    if (touched && in_contact && !now) ++losses;
    touched = touched || now;
    in_contact = now;
  }
  return losses;
}

double DiagnosticsAccumulator::first_difference_std(const std::vector<double>& x) {
  if (x.size() < 3) return 0.0;
  const std::size_t n = x.size() - 1;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i + 1] - x[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i + 1] - x[i] - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace vic

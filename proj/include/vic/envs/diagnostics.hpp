#pragma once

#include <vector>

#include "vic/envs/environment.hpp"

namespace vic {

/// Per-episode contact and tracking metrics.
struct EpisodeDiagnostics {
  double score = 0.0;
  int steps = 0;
  bool diverged = false;
  double peak_force = 0.0;      // largest total normal force, N
  double tracking_error = 0.0;  // mean ||q_des^t - q^{t+1}||; NaN for torque control
  int contact_losses = 0;       // tip force dropping to zero after the first touch
  double force_diff_std = 0.0;  // std of first differences of the tip force trace
  double mean_kp = 0.0;         // mean commanded stiffness; NaN for torque control
};

/// Folds step results into EpisodeDiagnostics. The tip force is sampled at the
/// physics rate.
class DiagnosticsAccumulator {
 public:
  void add(const StepResult& r);
  EpisodeDiagnostics finish() const;

  /// Contact losses in a force trace: transitions from > 0 to 0 after the first
  /// positive sample.
  static int count_contact_losses(const std::vector<double>& force);
  /// Population std of x[i+1] - x[i]; 0 for fewer than two differences.
  static double first_difference_std(const std::vector<double>& x);

 private:
  EpisodeDiagnostics d_;
  double tracking_sum_ = 0.0;
  int tracking_count_ = 0;
  double kp_sum_ = 0.0;
  int kp_count_ = 0;
  std::vector<double> force_;
};

}  // namespace vic

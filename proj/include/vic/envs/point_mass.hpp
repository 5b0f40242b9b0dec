#pragma once

#include "vic/envs/environment.hpp"

namespace vic {

struct PointMassConfig {
  SimConfig sim{1e-3, 20, 1.0, 10.0};
  double mass = 1.0;          // kg
  double force_limit = 1.0;   // N
  double target = 0.1;        // m from the start
  double travel_limit = 1.0;  // soft position limits at +-travel_limit
};

/// A mass on a frictionless horizontal rail that has to reach a target and stay there.
/// Per step reward is max(0, 1 - |x - target| / target), so standing still scores 0 and
/// the score is bounded by the number of control steps.
class PointMassEnv : public Environment {
 public:
  explicit PointMassEnv(PointMassConfig cfg = {},
                        Parametrization parametrization = Parametrization::kTorque,
                        GainSchedule gains = {}, TrackingPenaltyConfig tracking = {});

  std::string_view id() const override { return "point_mass"; }
  int observation_dim() const override { return 2; }
  std::vector<std::string> reward_names() const override;
  Eigen::VectorXd observation_scale() const override;

  const PointMassConfig& config() const { return cfg_; }
  static RobotModel make_model(const PointMassConfig& cfg);

 protected:
  Eigen::VectorXd observe() const override;
  void reset_task(std::mt19937_64& rng) override;
  RewardBreakdown reward(const StepInfo& info, const Eigen::VectorXd& q_des_prev) override;

 private:
  PointMassConfig cfg_;
};

}  // namespace vic

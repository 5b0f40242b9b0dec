#pragma once

#include "vic/envs/environment.hpp"

namespace vic {

struct WiperConfig {
  SimConfig sim{1e-3, 10, 4.0, 10.0};  // one revolution of the default circle
  double table_effective_mass = 0.5;  // kg, sets the contact damping
  double table_damping_ratio = 0.5;
  double regularization_velocity = 0.01;
  UncertaintySpec uncertainty = [] {
    UncertaintySpec u;
    u.ground_height_active = false;
    return u;
  }();
  CircleSpec circle;
  WiperRewardWeights reward;
  bool gravity_compensation = true;
  Range initial_yaw{-0.4, 0.4};
  Range initial_elbow{-1.2, 1.2};
  Range initial_pitch{0.0, 0.3};
};

/// Circle wiping on a table with a constant desired normal force. Gravity is
/// compensated by an additive feed-forward torque outside the policy's control law.
class WiperEnv : public Environment {
 public:
  WiperEnv(WiperConfig cfg, Parametrization parametrization, GainSchedule gains,
           TrackingPenaltyConfig tracking = {});

  std::string_view id() const override { return "wiper"; }
  int observation_dim() const override { return 7; }
  std::vector<std::string> reward_names() const override;
  Eigen::VectorXd observation_offset() const override;
  Eigen::VectorXd observation_scale() const override;

  const WiperConfig& config() const { return cfg_; }
  double table_height() const { return contact_.surface_height; }
  /// Magnitude of the contact force at the tool tip (normal and friction), N.
  double tip_force_magnitude() const;

 protected:
  Eigen::VectorXd observe() const override;
  void reset_task(std::mt19937_64& rng) override;
  Eigen::VectorXd feedforward() const override;
  RewardBreakdown reward(const StepInfo& info, const Eigen::VectorXd& q_des_prev) override;

 private:
  void set_stiffness(double k);

  WiperConfig cfg_;
};

}  // namespace vic

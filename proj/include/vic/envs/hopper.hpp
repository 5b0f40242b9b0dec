#pragma once

#include <optional>

#include "vic/envs/environment.hpp"

namespace vic {

enum class GroundResample { kOnLiftoff, kFixedInterval };

struct HopperConfig {
  SimConfig sim{1e-3, 10, 4.0, 10.0};
  double ground_stiffness = 1.0e5;  // N/m, a hard floor
  double ground_damping_ratio = 0.5;
  double ground_friction = 1.0;
  double regularization_velocity = 0.01;
  UncertaintySpec uncertainty;  // only ground_height is used
  GroundResample resample = GroundResample::kOnLiftoff;
  double resample_interval = 1.0;  // s, for kFixedInterval
  HopperRewardWeights reward;
  double drop_height = 0.05;     // initial clearance of the lowest point, m
  double initial_joint_noise = 0.1;  // rad, uniform half-width
};

/// Vertical hopping with a two-joint leg. The policy sees base height/velocity and
/// joint positions/velocities, never contact information.
class HopperEnv : public Environment {
 public:
  HopperEnv(HopperConfig cfg, Parametrization parametrization, GainSchedule gains,
            TrackingPenaltyConfig tracking = {});

  std::string_view id() const override { return "hopper"; }
  int observation_dim() const override { return 6; }
  std::vector<std::string> reward_names() const override;
  Eigen::VectorXd observation_offset() const override;
  Eigen::VectorXd observation_scale() const override;

  const HopperConfig& config() const { return cfg_; }
  double ground_height() const { return contact_.surface_height; }
  /// Base height above the current ground.
  double base_height() const { return state_.q[0] - contact_.surface_height; }

 protected:
  Eigen::VectorXd observe() const override;
  void reset_task(std::mt19937_64& rng) override;
  void after_substep() override;
  RewardBreakdown reward(const StepInfo& info, const Eigen::VectorXd& q_des_prev) override;

 private:
  double lowest_point() const;
  void draw_pending_ground();

  HopperConfig cfg_;
  bool in_contact_ = false;
  std::optional<double> pending_ground_;
  double next_resample_time_ = 0.0;
};

}  // namespace vic

#include "vic/envs/hopper.hpp"

#include <algorithm>

#include "vic/dynamics/kinematics.hpp"

namespace vic {

HopperEnv::HopperEnv(HopperConfig cfg, Parametrization parametrization, GainSchedule gains,
                     TrackingPenaltyConfig tracking)
    : Environment(hopper_preset(), cfg.sim, parametrization, std::move(gains), tracking),
      cfg_(std::move(cfg)) {
  cfg_.uncertainty.validate();
  contact_.normal_stiffness = cfg_.ground_stiffness;
  contact_.normal_damping = ContactParams::damping_for(cfg_.ground_stiffness, model_.total_mass(),
                                                       cfg_.ground_damping_ratio);
  contact_.coulomb_friction = cfg_.ground_friction;
  contact_.tangential_regularization_velocity = cfg_.regularization_velocity;
  contact_.validate();
}

std::vector<std::string> HopperEnv::reward_names() const {
  return {"height", "impact_penalty", "torque_smoothness", "tracking_penalty", "failure"};
}

Eigen::VectorXd HopperEnv::observe() const {
  Eigen::VectorXd obs(6);
  obs << state_.q[0], state_.qdot[0], state_.q[1], state_.q[2], state_.qdot[1], state_.qdot[2];
  return obs;
}

Eigen::VectorXd HopperEnv::observation_offset() const {
  Eigen::VectorXd o = Eigen::VectorXd::Zero(6);
  o[0] = 0.3;
  return o;
}

Eigen::VectorXd HopperEnv::observation_scale() const {
  Eigen::VectorXd s(6);
  s << 0.1, 1.0, 1.0, 1.0, 5.0, 5.0;
  return s;
}

double HopperEnv::lowest_point() const {
  const Kinematics kin = forward_kinematics(model_, state_.q);
  double z = kin.links.front().tip.z();
  for (const auto& l : kin.links) z = std::min(z, l.tip.z());
  return z;
}

void HopperEnv::reset_task(std::mt19937_64& rng) {
  const auto& u = cfg_.uncertainty;
  const double ground = u.ground_height_active ? u.ground_height.sample(rng) : u.ground_height.mid();
  record_draw("ground_height", ground);
  contact_.surface_height = ground;

  const Range noise{-cfg_.initial_joint_noise, cfg_.initial_joint_noise};
  Eigen::VectorXd q(3);
  q << 0.0, noise.sample(rng), noise.sample(rng);
  state_ = make_state(model_, q);
  state_.q[0] = ground - lowest_point() + cfg_.drop_height;

  in_contact_ = false;
  pending_ground_.reset();
  next_resample_time_ = cfg_.resample_interval;
}

void HopperEnv::draw_pending_ground() {
  const auto& u = cfg_.uncertainty;
  if (!u.ground_height_active) return;
  pending_ground_ = u.ground_height.sample(rng());
  record_draw("ground_height_pending", *pending_ground_);
}

// The ground only moves while the robot is clear of both the old and the new surface,
// so a resample never teleports the foot into the ground.
void HopperEnv::after_substep() {
  const bool contact = !state_.contacts.empty();
  if (cfg_.resample == GroundResample::kOnLiftoff) {
    if (in_contact_ && !contact) draw_pending_ground();
  } else if (state_.time + 1e-12 >= next_resample_time_) {
    next_resample_time_ += cfg_.resample_interval;
    draw_pending_ground();
  }
  if (!in_contact_ && contact) pending_ground_.reset();
  in_contact_ = contact;

  if (pending_ground_ && !contact) {
    if (lowest_point() >= std::max(*pending_ground_, contact_.surface_height) + 0.005) {
      contact_.surface_height = *pending_ground_;
      record_draw("ground_height", *pending_ground_);
      pending_ground_.reset();
    }
  }
}

RewardBreakdown HopperEnv::reward(const StepInfo& info, const Eigen::VectorXd& q_des_prev) {
  HopperRewardInput in;
  in.base_height = base_height();
  in.peak_force = info.peak_force;
  in.torque = info.torque;
  in.prev_torque = prev_torque_;
  in.q_des_prev = q_des_prev;
  in.q_next = joint_positions();
  return hopper_reward(in, cfg_.reward, tracking_);
}

}  // namespace vic

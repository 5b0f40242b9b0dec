#include "vic/envs/wiper.hpp"

#include <algorithm>
#include <cmath>

#include "vic/dynamics/dynamics.hpp"
#include "vic/dynamics/kinematics.hpp"
#include "vic/error.hpp"

namespace vic {

WiperEnv::WiperEnv(WiperConfig cfg, Parametrization parametrization, GainSchedule gains,
                   TrackingPenaltyConfig tracking)
    : Environment(arm_preset(), cfg.sim, parametrization, std::move(gains), tracking),
      cfg_(std::move(cfg)) {
  cfg_.uncertainty.validate();
  if (!(cfg_.circle.radius > 0.0)) throw ConfigError("circle.radius", "must be > 0");
  if (!(cfg_.circle.desired_force > 0.0)) throw ConfigError("circle.desired_force", "must be > 0");
  contact_.tangential_regularization_velocity = cfg_.regularization_velocity;
  contact_.surface_height = cfg_.uncertainty.table_height.mid();
  contact_.coulomb_friction = cfg_.uncertainty.friction.mid();
  set_stiffness(cfg_.uncertainty.stiffness.mid());
  contact_.validate();
}

std::vector<std::string> WiperEnv::reward_names() const {
  return {"circle_distance",     "tangential_velocity", "orientation", "contact_and_force",
          "bad_contact_penalty", "tracking_penalty",    "failure"};
}

void WiperEnv::set_stiffness(double k) {
  contact_.normal_stiffness = k;
  contact_.normal_damping =
      ContactParams::damping_for(k, cfg_.table_effective_mass, cfg_.table_damping_ratio);
}

double WiperEnv::tip_force_magnitude() const {
  const int tip = model_.dof() - 1;
  double fn = 0.0, ft = 0.0;
  for (const auto& c : state_.contacts) {
    if (c.body_id == tip) {
      fn += c.normal_force;
      ft += c.tangential_force;
    }
  }
  return std::hypot(fn, ft);
}

Eigen::VectorXd WiperEnv::observe() const {
  Eigen::VectorXd obs(7);
  obs << state_.q, state_.qdot, tip_force_magnitude();
  return obs;
}

Eigen::VectorXd WiperEnv::observation_offset() const {
  Eigen::VectorXd o = Eigen::VectorXd::Zero(7);
  o[2] = 0.8;
  o[6] = cfg_.circle.desired_force;
  return o;
}

Eigen::VectorXd WiperEnv::observation_scale() const {
  Eigen::VectorXd s(7);
  s << 1.0, 1.0, 0.5, 2.0, 2.0, 2.0, cfg_.circle.desired_force;
  return s;
}

void WiperEnv::reset_task(std::mt19937_64& rng) {
  const auto& u = cfg_.uncertainty;
  const double height = u.table_height_active ? u.table_height.sample(rng) : u.table_height.mid();
  const double mu = u.friction_active ? u.friction.sample(rng) : u.friction.mid();
  const double k = u.stiffness_active ? u.stiffness.sample(rng) : u.stiffness.mid();
  record_draw("table_height", height);
  record_draw("friction", mu);
  record_draw("stiffness", k);
  contact_.surface_height = height;
  contact_.coulomb_friction = mu;
  set_stiffness(k);

  Eigen::VectorXd q(3);
  q << cfg_.initial_yaw.sample(rng), cfg_.initial_elbow.sample(rng), cfg_.initial_pitch.sample(rng);
  state_ = make_state(model_, q);
}

Eigen::VectorXd WiperEnv::feedforward() const {
  if (!cfg_.gravity_compensation) return Eigen::VectorXd::Zero(model_.n_joints());
  return gravity_torque(model_, state_.q);
}

RewardBreakdown WiperEnv::reward(const StepInfo& info, const Eigen::VectorXd& q_des_prev) {
  const Kinematics kin = forward_kinematics(model_, state_.q);
  const int tip = model_.dof() - 1;
  const auto& tool = kin.links[tip];
  const Eigen::Vector3d v = point_jacobian(model_, kin, tip, tool.tip) * state_.qdot;
  const Eigen::Vector3d dir = (tool.tip - tool.origin).normalized();

  WiperRewardInput in;
  in.tip_position = tool.tip.head<2>();
  in.tip_velocity = v.head<2>();
  in.tool_tilt = std::acos(std::clamp(-dir.z(), -1.0, 1.0));
  in.tip_force = info.tip_force;
  in.tip_in_contact = info.tip_in_contact;
  in.other_force = info.other_force;
  in.q_des_prev = q_des_prev;
  in.q_next = joint_positions();
  return wiper_reward(in, cfg_.circle, cfg_.reward, tracking_);
}

}  // namespace vic

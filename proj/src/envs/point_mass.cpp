#include "vic/envs/point_mass.hpp"

#include <algorithm>
#include <cmath>

namespace vic {

RobotModel PointMassEnv::make_model(const PointMassConfig& cfg) {
  RobotModel m;
  m.name = "point_mass";
  m.base_fixed = true;
  m.gravity = Eigen::Vector3d::Zero();
  m.base_position = Eigen::Vector3d(0.0, 0.0, 1.0);  // well clear of the contact plane
  LinkSpec l;
  l.name = "slider";
  l.kind = JointKind::kPrismatic;
  l.axis = Eigen::Vector3d::UnitX();
  l.direction = Eigen::Vector3d::UnitX();
  l.length = 0.01;
  l.mass = cfg.mass;
  l.com_offset = 0.0;
  l.lower = -cfg.travel_limit;
  l.upper = cfg.travel_limit;
  m.links = {l};
  m.torque_limits = {cfg.force_limit};
  return m;
}

PointMassEnv::PointMassEnv(PointMassConfig cfg, Parametrization parametrization,
                           GainSchedule gains, TrackingPenaltyConfig tracking)
    : Environment(make_model(cfg), cfg.sim, parametrization, std::move(gains), tracking),
      cfg_(cfg) {}

std::vector<std::string> PointMassEnv::reward_names() const {
  return {"reach", "tracking_penalty", "failure"};
}

Eigen::VectorXd PointMassEnv::observation_scale() const {
  Eigen::VectorXd s(2);
  s << cfg_.target, 0.5;
  return s;
}

Eigen::VectorXd PointMassEnv::observe() const {
  Eigen::VectorXd obs(2);
  obs << state_.q[0] - cfg_.target, state_.qdot[0];
  return obs;
}

void PointMassEnv::reset_task(std::mt19937_64& /*rng*/) {
  state_ = make_state(model_, Eigen::VectorXd::Zero(1));
}

RewardBreakdown PointMassEnv::reward(const StepInfo& /*info*/, const Eigen::VectorXd& q_des_prev) {
  RewardBreakdown r;
  const double err = std::abs(state_.q[0] - cfg_.target);
  r.add("reach", std::max(0.0, 1.0 - err / cfg_.target));
  r.add("tracking_penalty", tracking_penalty(tracking_, q_des_prev, joint_positions()));
  return r;
}

}  // namespace vic

#include "vic/dynamics/robot_model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {

double RobotModel::total_mass() const {
  double m = 0.0;
  for (const auto& l : links) m += l.mass;
  return m;
}

Eigen::VectorXd RobotModel::lower_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = links[i].lower;
  return v;
}

Eigen::VectorXd RobotModel::upper_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = links[i].upper;
  return v;
}

void RobotModel::validate() const {
  if (links.empty()) throw ConfigError("links", "model has no links");
  if (!base_fixed && links.front().kind != JointKind::kPrismatic) {
    throw ConfigError("links[0].kind", "floating base coordinate must be prismatic");
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    const std::string p = fmt::format("links[{}]", i);
    if (!(l.mass > 0.0)) throw ConfigError(p + ".mass", "must be > 0");
    if (!(l.inertia >= 0.0)) throw ConfigError(p + ".inertia", "must be >= 0");
    if (!(l.length > 0.0)) throw ConfigError(p + ".length", "must be > 0");
    if (!(l.lower < l.upper)) throw ConfigError(p + ".lower", "lo > hi");
    if (!(l.damping >= 0.0)) throw ConfigError(p + ".damping", "must be >= 0");
    if (!(l.armature >= 0.0)) throw ConfigError(p + ".armature", "must be >= 0");
    if (std::abs(l.axis.norm() - 1.0) > 1e-9) throw ConfigError(p + ".axis", "must be unit");
    if (std::abs(l.direction.norm() - 1.0) > 1e-9) {
      throw ConfigError(p + ".direction", "must be unit");
    }
  }
  if (static_cast<int>(torque_limits.size()) != n_joints()) {
    throw ConfigError("torque_limits", fmt::format("expected {} entries, got {}", n_joints(),
                                                   torque_limits.size()));
  }
  for (std::size_t i = 0; i < torque_limits.size(); ++i) {
    if (!(torque_limits[i] > 0.0)) {
      throw ConfigError(fmt::format("torque_limits[{}]", i), "must be > 0");
    }
  }
}

// The hopper numbers are assumptions for a small two-joint leg: 32 cm from base to
// foot when fully stretched, roughly 1 kg total.
RobotModel hopper_preset() {
  RobotModel m;
  m.name = "hopper";
  m.base_fixed = false;
  m.base_position = Eigen::Vector3d::Zero();

  LinkSpec base;
  base.name = "base";
  base.kind = JointKind::kPrismatic;
  base.axis = Eigen::Vector3d::UnitZ();
  base.direction = -Eigen::Vector3d::UnitZ();
  base.length = 0.02;
  base.mass = 0.8;
  base.com_offset = 0.0;
  base.inertia = 0.0;
  base.lower = -1.0;
  base.upper = 3.0;

  LinkSpec thigh;
  thigh.name = "thigh";
  thigh.axis = Eigen::Vector3d::UnitY();
  thigh.direction = -Eigen::Vector3d::UnitZ();
  thigh.length = 0.15;
  thigh.mass = 0.15;
  thigh.com_offset = 0.075;
  thigh.inertia = 0.15 * 0.15 * 0.15 / 12.0;
  thigh.lower = -1.6;
  thigh.upper = 1.6;
  thigh.damping = 0.002;
  thigh.armature = 3e-4;

  LinkSpec shank = thigh;
  shank.name = "shank";
  shank.mass = 0.1;
  shank.inertia = 0.1 * 0.15 * 0.15 / 12.0;
  shank.lower = -2.8;
  shank.upper = 2.8;

  m.links = {base, thigh, shank};
  m.torque_limits = {2.0, 2.0};
  m.limit_stiffness = 20.0;
  m.limit_damping = 0.05;
  m.validate();
  return m;
}

RobotModel arm_preset() {
  RobotModel m;
  m.name = "arm";
  m.base_fixed = true;
  m.base_position = Eigen::Vector3d(0.0, 0.0, 1.25);

  LinkSpec upper;
  upper.name = "upper_arm";
  upper.axis = Eigen::Vector3d::UnitZ();
  upper.direction = Eigen::Vector3d::UnitX();
  upper.length = 0.35;
  upper.mass = 2.0;
  upper.com_offset = 0.175;
  upper.inertia = 2.0 * 0.35 * 0.35 / 12.0;
  upper.lower = -2.6;
  upper.upper = 2.6;
  upper.damping = 0.05;
  upper.armature = 0.02;

  LinkSpec fore = upper;
  fore.name = "forearm";
  fore.length = 0.30;
  fore.mass = 1.5;
  fore.com_offset = 0.15;
  fore.inertia = 1.5 * 0.30 * 0.30 / 12.0;

  LinkSpec tool;
  tool.name = "tool";
  tool.axis = Eigen::Vector3d::UnitY();
  tool.direction = Eigen::Vector3d::UnitX();
  tool.length = 0.50;
  tool.mass = 0.6;
  tool.com_offset = 0.25;
  tool.inertia = 0.6 * 0.5 * 0.5 / 12.0;
  tool.lower = -0.3;
  tool.upper = 2.0;
  tool.damping = 0.02;
  tool.armature = 0.01;

  m.links = {upper, fore, tool};
  m.torque_limits = {20.0, 15.0, 8.0};
  m.limit_stiffness = 100.0;
  m.limit_damping = 1.0;
  m.validate();
  return m;
}

RobotModel pendulum_model(double length, double mass, double com_offset, double inertia) {
  RobotModel m;
  m.name = "pendulum";
  m.base_fixed = true;
  LinkSpec l;
  l.name = "link";
  l.axis = Eigen::Vector3d::UnitY();
  l.direction = Eigen::Vector3d::UnitX();
  l.length = length;
  l.mass = mass;
  l.com_offset = com_offset;
  l.inertia = inertia;
  l.lower = -100.0;
  l.upper = 100.0;
  m.links = {l};
  m.torque_limits = {1e3};
  m.validate();
  return m;
}

}  // namespace vic

#include "vic/dynamics/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {

Kinematics forward_kinematics(const RobotModel& model, const Eigen::VectorXd& q) {
  const int n = model.dof();
  if (q.size() != n) {
    throw InvalidState(fmt::format("q has {} entries, model has {} coordinates", q.size(), n));
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(q[i])) throw InvalidState(fmt::format("q[{}] is not finite", i));
    const auto& l = model.links[i];
    const double guard = 10.0 * std::max(std::abs(l.lower), std::abs(l.upper));
    if (std::abs(q[i]) > guard) {
      throw InvalidState(fmt::format("q[{}] = {} beyond ten times the joint range", i, q[i]));
    }
  }

  Kinematics kin;
  kin.links.resize(n);
  Eigen::Matrix3d parent_rot = Eigen::Matrix3d::Identity();
  Eigen::Vector3d parent_tip = model.base_position;
  for (int i = 0; i < n; ++i) {
    const auto& l = model.links[i];
    auto& pose = kin.links[i];
    pose.axis = parent_rot * l.axis;
    if (l.kind == JointKind::kRevolute) {
      pose.rotation = parent_rot * Eigen::AngleAxisd(q[i], l.axis).toRotationMatrix();
      pose.origin = parent_tip;
    } else {
      pose.rotation = parent_rot;
      pose.origin = parent_tip + pose.axis * q[i];
    }
    const Eigen::Vector3d dir = pose.rotation * l.direction;
    pose.com = pose.origin + dir * l.com_offset;
    pose.tip = pose.origin + dir * l.length;
    parent_rot = pose.rotation;
    parent_tip = pose.tip;
  }
  return kin;
}

Eigen::MatrixXd point_jacobian(const RobotModel& model, const Kinematics& kin, int link,
                               const Eigen::Vector3d& point) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, model.dof());
  for (int j = 0; j <= link; ++j) {
    const auto& pose = kin.links[j];
    if (model.links[j].kind == JointKind::kRevolute) {
      jac.col(j) = pose.axis.cross(point - pose.origin);
    } else {
      jac.col(j) = pose.axis;
    }
  }
  return jac;
}

Eigen::MatrixXd angular_jacobian(const RobotModel& model, const Kinematics& kin, int link) {
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, model.dof());
  for (int j = 0; j <= link; ++j) {
    if (model.links[j].kind == JointKind::kRevolute) jac.col(j) = kin.links[j].axis;
  }
  return jac;
}

}  // namespace vic

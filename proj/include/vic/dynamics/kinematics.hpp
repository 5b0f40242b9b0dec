#pragma once

#include <vector>

#include <Eigen/Core>

#include "vic/dynamics/robot_model.hpp"

namespace vic {

struct LinkPose {
  Eigen::Matrix3d rotation;    // own frame -> world
  Eigen::Vector3d origin;      // joint position, world
  Eigen::Vector3d axis;        // joint axis, world
  Eigen::Vector3d com;         // world
  Eigen::Vector3d tip;         // world
};

struct Kinematics {
  std::vector<LinkPose> links;

  const Eigen::Vector3d& end_point() const { return links.back().tip; }
};

/// Poses of every link plus the end point (foot / tool tip).
/// Throws InvalidState for non-finite q or q beyond ten times the joint range.
Kinematics forward_kinematics(const RobotModel& model, const Eigen::VectorXd& q);

/// 3 x dof linear Jacobian of a world point rigidly attached to link `link`.
Eigen::MatrixXd point_jacobian(const RobotModel& model, const Kinematics& kin, int link,
                               const Eigen::Vector3d& point);

/// 3 x dof angular Jacobian of link `link`.
Eigen::MatrixXd angular_jacobian(const RobotModel& model, const Kinematics& kin, int link);

}  // namespace vic

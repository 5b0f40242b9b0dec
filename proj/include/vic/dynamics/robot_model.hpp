#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace vic {

enum class JointKind { kPrismatic, kRevolute };

/// One body of a serial chain together with the joint connecting it to its parent.
///
/// The joint sits at the parent's tip (or at `RobotModel::base_position` for the first
/// link). The body extends from the joint along `direction` (own frame) for `length`
/// metres; its tip is where the next joint attaches and is also a contact candidate.
struct LinkSpec {
  std::string name;
  JointKind kind = JointKind::kRevolute;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();       // parent frame, unit
  Eigen::Vector3d direction = -Eigen::Vector3d::UnitZ();  // own frame, unit
  double length = 0.1;      // m
  double mass = 0.1;        // kg
  double com_offset = 0.05; // m from the joint along `direction`
  double inertia = 0.0;     // kg m^2, isotropic about the COM
  double lower = -3.14159;  // rad or m
  double upper = 3.14159;   // rad or m
  double damping = 0.0;     // viscous joint friction, N m s/rad or N s/m
  double armature = 0.0;    // reflected rotor inertia, kg m^2 or kg
};

/// Kinematic/dynamic description of an articulated chain.
///
/// A floating (non-fixed) base contributes one unactuated leading coordinate; all
/// remaining coordinates are actuated and have a torque limit.
struct RobotModel {
  std::string name;
  std::vector<LinkSpec> links;
  Eigen::Vector3d base_position = Eigen::Vector3d::Zero();
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};
  bool base_fixed = true;
  std::vector<double> torque_limits;  // one per actuated joint
  double limit_stiffness = 20.0;      // soft joint-limit spring
  double limit_damping = 0.1;

  int dof() const { return static_cast<int>(links.size()); }
  int n_joints() const { return dof() - first_actuated(); }
  int first_actuated() const { return base_fixed ? 0 : 1; }
  double total_mass() const;
  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;

  /// Throws ConfigError when an invariant (positive masses, lengths, limits...) fails.
  void validate() const;
};

/// Single-leg hopper: vertical base slider, hip and knee pitch joints.
/// Fully stretched height (base to foot) is 0.32 m.
RobotModel hopper_preset();

/// Table-wiping arm: two yaw joints moving the wrist over the table plus a wrist pitch
/// joint tilting the tool link down onto the surface.
RobotModel arm_preset();

/// One-link pendulum about a horizontal axis; handy for analytic checks.
RobotModel pendulum_model(double length, double mass, double com_offset, double inertia);

}  // namespace vic

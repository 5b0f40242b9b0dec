#pragma once

#include <Eigen/Core>

#include "vic/dynamics/robot_model.hpp"

namespace vic {

/// Joint-space inertia including rotor armature. Symmetric positive definite.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q);

/// M(q) qddot + C(q, qdot) qdot + g(q), computed by recursive Newton-Euler.
Eigen::VectorXd inverse_dynamics(const RobotModel& model, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot, const Eigen::VectorXd& qddot);

/// C(q, qdot) qdot + g(q).
Eigen::VectorXd bias_forces(const RobotModel& model, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& qdot);

/// g(q): generalized force needed to hold the chain still.
Eigen::VectorXd gravity_torque(const RobotModel& model, const Eigen::VectorXd& q);

double kinetic_energy(const RobotModel& model, const Eigen::VectorXd& q,
                      const Eigen::VectorXd& qdot);
double gravity_potential(const RobotModel& model, const Eigen::VectorXd& q);

}  // namespace vic

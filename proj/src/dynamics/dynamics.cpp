#include "vic/dynamics/dynamics.hpp"

#include <vector>

#include <Eigen/Geometry>

#include "vic/dynamics/kinematics.hpp"

namespace vic {
namespace {

// Recursive Newton-Euler in world coordinates. Inertias are isotropic about the COM,
// so the gyroscopic term w x (I w) vanishes.
Eigen::VectorXd rnea(const RobotModel& model, const Kinematics& kin, const Eigen::VectorXd& qd,
                     const Eigen::VectorXd& qdd, const Eigen::Vector3d& gravity) {
  const int n = model.dof();
  std::vector<Eigen::Vector3d> omega(n), alpha(n), acc_origin(n), acc_com(n);

  Eigen::Vector3d w_p = Eigen::Vector3d::Zero();
  Eigen::Vector3d a_p = Eigen::Vector3d::Zero();
  Eigen::Vector3d acc_p = -gravity;  // fictitious upward acceleration carries gravity
  Eigen::Vector3d origin_p = model.base_position;

  for (int i = 0; i < n; ++i) {
    const auto& pose = kin.links[i];
    const Eigen::Vector3d& ax = pose.axis;
    const Eigen::Vector3d r = pose.origin - origin_p;
    Eigen::Vector3d acc = acc_p + a_p.cross(r) + w_p.cross(w_p.cross(r));
    if (model.links[i].kind == JointKind::kRevolute) {
      omega[i] = w_p + ax * qd[i];
      alpha[i] = a_p + ax * qdd[i] + w_p.cross(ax * qd[i]);
    } else {
      omega[i] = w_p;
      alpha[i] = a_p;
      acc += ax * qdd[i] + 2.0 * w_p.cross(ax * qd[i]);
    }
    acc_origin[i] = acc;
    const Eigen::Vector3d rc = pose.com - pose.origin;
    acc_com[i] = acc + alpha[i].cross(rc) + omega[i].cross(omega[i].cross(rc));
    w_p = omega[i];
    a_p = alpha[i];
    acc_p = acc;
    origin_p = pose.origin;
  }

  Eigen::VectorXd tau(n);
  Eigen::Vector3d f_child = Eigen::Vector3d::Zero();
  Eigen::Vector3d n_child = Eigen::Vector3d::Zero();
  Eigen::Vector3d origin_child = Eigen::Vector3d::Zero();
  for (int i = n - 1; i >= 0; --i) {
    const auto& l = model.links[i];
    const auto& pose = kin.links[i];
    const Eigen::Vector3d f_com = l.mass * acc_com[i];
    Eigen::Vector3d f = f_com;
    Eigen::Vector3d moment = l.inertia * alpha[i] + (pose.com - pose.origin).cross(f_com);
    if (i + 1 < n) {
      f += f_child;
      moment += n_child + (origin_child - pose.origin).cross(f_child);
    }
    tau[i] = (l.kind == JointKind::kRevolute ? pose.axis.dot(moment) : pose.axis.dot(f)) +
             l.armature * qdd[i];
    f_child = f;
    n_child = moment;
    origin_child = pose.origin;
  }
  return tau;
}

}  // namespace

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Eigen::VectorXd& q) {
  const int n = model.dof();
  const Kinematics kin = forward_kinematics(model, q);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    m.col(j) = rnea(model, kin, zero, Eigen::VectorXd::Unit(n, j), Eigen::Vector3d::Zero());
  }
  // Columns are exact up to round-off; symmetrize so downstream checks see M == M^T.
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd inverse_dynamics(const RobotModel& model, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot, const Eigen::VectorXd& qddot) {
  const Kinematics kin = forward_kinematics(model, q);
  return rnea(model, kin, qdot, qddot, model.gravity);
}

Eigen::VectorXd bias_forces(const RobotModel& model, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& qdot) {
  return inverse_dynamics(model, q, qdot, Eigen::VectorXd::Zero(model.dof()));
}

Eigen::VectorXd gravity_torque(const RobotModel& model, const Eigen::VectorXd& q) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.dof());
  return inverse_dynamics(model, q, zero, zero);
}

double kinetic_energy(const RobotModel& model, const Eigen::VectorXd& q,
                      const Eigen::VectorXd& qdot) {
  return 0.5 * qdot.dot(mass_matrix(model, q) * qdot);
}

double gravity_potential(const RobotModel& model, const Eigen::VectorXd& q) {
  const Kinematics kin = forward_kinematics(model, q);
  double pe = 0.0;
  for (int i = 0; i < model.dof(); ++i) {
    pe -= model.links[i].mass * model.gravity.dot(kin.links[i].com);
  }
  return pe;
}

}  // namespace vic

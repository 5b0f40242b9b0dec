#pragma once

#include <vector>

#include <Eigen/Core>

#include "vic/dynamics/contact.hpp"
#include "vic/dynamics/robot_model.hpp"

namespace vic {

struct ContactPoint {
  Eigen::Vector3d body_point = Eigen::Vector3d::Zero();  // world
  double penetration_depth = 0.0;                        // m
  double normal_force = 0.0;                             // N, >= 0
  double tangential_force = 0.0;                         // N, magnitude
  int body_id = -1;                                      // link whose tip touches
};

struct EnvState {
  Eigen::VectorXd q;
  Eigen::VectorXd qdot;
  double time = 0.0;
  std::vector<ContactPoint> contacts;  // active contacts after the last step
};

/// Fresh state at rest for `model` at configuration `q`.
EnvState make_state(const RobotModel& model, const Eigen::VectorXd& q);

/// Sum of active normal forces reported on the tip of `link`.
double normal_force_on(const EnvState& state, int link);

/// Advance one semi-implicit Euler step.
///
/// `torque` has one entry per actuated joint and is clamped to the model's limits.
/// Joint damping and the contact damping/friction are integrated implicitly (velocity
/// level), springs explicitly; positions are advanced with the new velocities.
/// Throws SimulationDiverged if the result is not finite.
EnvState step(const RobotModel& model, const EnvState& state, const Eigen::VectorXd& torque,
              const ContactParams& params, double dt);

/// Kinetic + gravity + contact-spring + joint-limit-spring energy. Non-increasing along
/// zero-torque trajectories up to integration error.
double mechanical_energy(const RobotModel& model, const EnvState& state,
                         const ContactParams& params);

}  // namespace vic

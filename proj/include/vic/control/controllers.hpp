#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

namespace vic {

/// How the policy output is turned into joint torques.
enum class Parametrization { kTorque, kFixedGainPD, kVariableGainPD };

/// "torque", "fixed_pd", "variable_pd".
std::string_view to_string(Parametrization p);
Parametrization parse_parametrization(std::string_view name);

struct TorqueCommand {
  Eigen::VectorXd tau;  // N m (or N)
};

struct FixedGainCommand {
  Eigen::VectorXd q_des;
};

struct VariableGainCommand {
  Eigen::VectorXd q_des;
  Eigen::VectorXd kp;  // per joint, clamped to [kp_min, kp_max]
};

using ControlCommand = std::variant<TorqueCommand, FixedGainCommand, VariableGainCommand>;

Parametrization parametrization_of(const ControlCommand& cmd);

/// Desired positions carried by a PD command; empty for torque commands.
Eigen::VectorXd desired_positions(const ControlCommand& cmd);

struct GainSchedule {
  Eigen::VectorXd kp_fixed;  // per joint (FixedGainPD)
  double kd_ratio = 0.4;
  double kp_min = 0.05;
  double kp_max = 10.0;

  static GainSchedule uniform(int n_joints, double kp, double kd_ratio = 0.4);
  void validate(int n_joints) const;
};

/// Damping tied to stiffness by a square-root law: kd = ratio * sqrt(kp).
/// Throws std::invalid_argument (via vic::Error) for negative kp.
double kd_from_kp(double kp, double kd_ratio);

/// Joint torque for one control law, clamped elementwise to +-torque_limits.
///
///   Torque:          tau = tau_cmd
///   FixedGainPD:     tau = Kp (q_des - q) - Kd qdot,          Kd = kd_from_kp(Kp)
///   VariableGainPD:  tau = Kp(xi) (q_des - q) - Kd(xi) qdot,  Kd(xi) = kd_from_kp(Kp(xi))
///
/// Stateless; the same inputs always give the same torque.
Eigen::VectorXd compute_torque(const ControlCommand& cmd, const GainSchedule& gains,
                               const Eigen::VectorXd& q, const Eigen::VectorXd& qdot,
                               const Eigen::VectorXd& torque_limits);

/// Affine map between bounded network outputs in [-1, 1]^d and control commands.
///
/// d = n for Torque and FixedGainPD, 2n for VariableGainPD (positions first, then
/// gains). Torques map onto +-limit, positions onto [lower, upper], gains onto
/// [kp_min, kp_max].
struct ActionCodec {
  Parametrization parametrization = Parametrization::kTorque;
  Eigen::VectorXd torque_limits;
  Eigen::VectorXd position_lower;
  Eigen::VectorXd position_upper;
  double kp_min = 0.05;
  double kp_max = 10.0;

  int n_joints() const { return static_cast<int>(torque_limits.size()); }
  int action_dim() const;

  /// Raw values outside [-1, 1] are clamped. Wrong length throws DimensionMismatch.
  ControlCommand decode(const Eigen::VectorXd& raw) const;
  Eigen::VectorXd encode(const ControlCommand& cmd) const;
};

}  // namespace vic

#include "vic/control/controllers.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {
namespace {

void expect_size(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() != n) {
    throw DimensionMismatch(fmt::format("{} has {} entries, expected {}", what, v.size(), n));
  }
}

// [-1, 1] -> [lo, hi]
double to_range(double raw, double lo, double hi) {
  return lo + 0.5 * (std::clamp(raw, -1.0, 1.0) + 1.0) * (hi - lo);
}

double from_range(double value, double lo, double hi) {
  return 2.0 * (value - lo) / (hi - lo) - 1.0;
}

}  // namespace

std::string_view to_string(Parametrization p) {
  switch (p) {
    case Parametrization::kTorque: return "torque";
    case Parametrization::kFixedGainPD: return "fixed_pd";
    case Parametrization::kVariableGainPD: return "variable_pd";
  }
  return "unknown";
}

Parametrization parse_parametrization(std::string_view name) {
  if (name == "torque") return Parametrization::kTorque;
  if (name == "fixed_pd") return Parametrization::kFixedGainPD;
  if (name == "variable_pd") return Parametrization::kVariableGainPD;
  throw ConfigError("parametrization", fmt::format("unknown value '{}'", name));
}

Parametrization parametrization_of(const ControlCommand& cmd) {
  return static_cast<Parametrization>(cmd.index());
}

Eigen::VectorXd desired_positions(const ControlCommand& cmd) {
  if (const auto* f = std::get_if<FixedGainCommand>(&cmd)) return f->q_des;
  if (const auto* v = std::get_if<VariableGainCommand>(&cmd)) return v->q_des;
  return {};
}

GainSchedule GainSchedule::uniform(int n_joints, double kp, double kd_ratio) {
  GainSchedule g;
  g.kp_fixed = Eigen::VectorXd::Constant(n_joints, kp);
  g.kd_ratio = kd_ratio;
  return g;
}

void GainSchedule::validate(int n_joints) const {
  if (kp_fixed.size() != n_joints) {
    throw ConfigError("kp_fixed", fmt::format("expected {} entries", n_joints));
  }
  if ((kp_fixed.array() < 0.0).any()) throw ConfigError("kp_fixed", "must be >= 0");
  if (!(kd_ratio > 0.0)) throw ConfigError("kd_ratio", "must be > 0");
  if (!(kp_min > 0.0)) throw ConfigError("kp_min", "must be > 0");
  if (!(kp_min <= kp_max)) throw ConfigError("kp_min", "lo > hi");
}

double kd_from_kp(double kp, double kd_ratio) {
  if (kp < 0.0) throw Error(fmt::format("kd_from_kp: negative stiffness {}", kp));
  return kd_ratio * std::sqrt(kp);
}

Eigen::VectorXd compute_torque(const ControlCommand& cmd, const GainSchedule& gains,
                               const Eigen::VectorXd& q, const Eigen::VectorXd& qdot,
                               const Eigen::VectorXd& torque_limits) {
  const int n = static_cast<int>(torque_limits.size());
  expect_size(q, n, "q");
  expect_size(qdot, n, "qdot");

  Eigen::VectorXd tau(n);
  if (const auto* t = std::get_if<TorqueCommand>(&cmd)) {
    expect_size(t->tau, n, "tau_cmd");
    tau = t->tau;
  } else if (const auto* f = std::get_if<FixedGainCommand>(&cmd)) {
    expect_size(f->q_des, n, "q_des");
    expect_size(gains.kp_fixed, n, "kp_fixed");
    for (int i = 0; i < n; ++i) {
      const double kp = gains.kp_fixed[i];
      tau[i] = kp * (f->q_des[i] - q[i]) - kd_from_kp(kp, gains.kd_ratio) * qdot[i];
    }
  } else {
    const auto& v = std::get<VariableGainCommand>(cmd);
    expect_size(v.q_des, n, "q_des");
    expect_size(v.kp, n, "kp");
    for (int i = 0; i < n; ++i) {
      const double kp = std::clamp(v.kp[i], gains.kp_min, gains.kp_max);
      tau[i] = kp * (v.q_des[i] - q[i]) - kd_from_kp(kp, gains.kd_ratio) * qdot[i];
    }
  }
  return tau.cwiseMax(-torque_limits).cwiseMin(torque_limits);
}

int ActionCodec::action_dim() const {
  return parametrization == Parametrization::kVariableGainPD ? 2 * n_joints() : n_joints();
}

ControlCommand ActionCodec::decode(const Eigen::VectorXd& raw) const {
  const int n = n_joints();
  expect_size(raw, action_dim(), "action");
  switch (parametrization) {
    case Parametrization::kTorque: {
      TorqueCommand c;
      c.tau = raw.cwiseMax(-1.0).cwiseMin(1.0).cwiseProduct(torque_limits);
      return c;
    }
    case Parametrization::kFixedGainPD: {
      FixedGainCommand c;
      c.q_des.resize(n);
      for (int i = 0; i < n; ++i) c.q_des[i] = to_range(raw[i], position_lower[i], position_upper[i]);
      return c;
    }
    case Parametrization::kVariableGainPD: {
      VariableGainCommand c;
      c.q_des.resize(n);
      c.kp.resize(n);
      for (int i = 0; i < n; ++i) {
        c.q_des[i] = to_range(raw[i], position_lower[i], position_upper[i]);
        c.kp[i] = to_range(raw[n + i], kp_min, kp_max);
      }
      return c;
    }
  }
  throw Error("unreachable parametrization");
}

Eigen::VectorXd ActionCodec::encode(const ControlCommand& cmd) const {
  const int n = n_joints();
  if (parametrization_of(cmd) != parametrization) {
    throw MismatchError(fmt::format("codec expects {} command, got {}", to_string(parametrization),
                                    to_string(parametrization_of(cmd))));
  }
  Eigen::VectorXd raw(action_dim());
  if (const auto* t = std::get_if<TorqueCommand>(&cmd)) {
    expect_size(t->tau, n, "tau_cmd");
    raw = t->tau.cwiseQuotient(torque_limits);
  } else if (const auto* f = std::get_if<FixedGainCommand>(&cmd)) {
    expect_size(f->q_des, n, "q_des");
    for (int i = 0; i < n; ++i) raw[i] = from_range(f->q_des[i], position_lower[i], position_upper[i]);
  } else {
    const auto& v = std::get<VariableGainCommand>(cmd);
    expect_size(v.q_des, n, "q_des");
    expect_size(v.kp, n, "kp");
    for (int i = 0; i < n; ++i) {
      raw[i] = from_range(v.q_des[i], position_lower[i], position_upper[i]);
      raw[n + i] = from_range(v.kp[i], kp_min, kp_max);
    }
  }
  return raw;
}

}  // namespace vic

#include "vic/envs/environment.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {

double Range::sample(std::mt19937_64& rng) const {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void UncertaintySpec::validate() const {
  auto check = [](const Range& r, const char* name) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw ConfigError(name, "must be finite");
    if (r.lo > r.hi) throw ConfigError(name, fmt::format("lo > hi ({} > {})", r.lo, r.hi));
  };
  check(ground_height, "uncertainty.ground_height");
  check(table_height, "uncertainty.table_height");
  check(friction, "uncertainty.friction");
  check(stiffness, "uncertainty.stiffness");
  if (friction.lo < 0.0) throw ConfigError("uncertainty.friction", "must be >= 0");
  if (stiffness.lo <= 0.0) throw ConfigError("uncertainty.stiffness", "must be > 0");
}

int SimConfig::horizon_steps() const {
  return static_cast<int>(std::lround(horizon / control_dt()));
}

void SimConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.01)) throw ConfigError("sim.dt", "must be in (0, 0.01]");
  if (decimation < 1) throw ConfigError("sim.decimation", "must be >= 1");
  if (!(horizon > 0.0)) throw ConfigError("sim.horizon", "must be > 0");
  if (horizon_steps() < 1) throw ConfigError("sim.horizon", "shorter than one control step");
  if (!(failure_penalty >= 0.0)) throw ConfigError("sim.failure_penalty", "must be >= 0");
}

Environment::Environment(RobotModel model, SimConfig sim, Parametrization parametrization,
                         GainSchedule gains, TrackingPenaltyConfig tracking)
    : model_(std::move(model)), sim_(sim), gains_(std::move(gains)), tracking_(tracking) {
  model_.validate();
  sim_.validate();
  const int n = model_.n_joints();
  if (gains_.kp_fixed.size() == 0) gains_.kp_fixed = Eigen::VectorXd::Constant(n, 5.0);
  gains_.validate(n);
  if (tracking_.k < 0.0) throw ConfigError("tracking.k", "must be >= 0");
  codec_.parametrization = parametrization;
  codec_.torque_limits = Eigen::Map<const Eigen::VectorXd>(model_.torque_limits.data(), n);
  codec_.position_lower = model_.lower_limits().tail(n);
  codec_.position_upper = model_.upper_limits().tail(n);
  codec_.kp_min = gains_.kp_min;
  codec_.kp_max = gains_.kp_max;
}

Eigen::VectorXd Environment::joint_positions() const {
  return state_.q.tail(model_.n_joints());
}

Eigen::VectorXd Environment::joint_velocities() const {
  return state_.qdot.tail(model_.n_joints());
}

Eigen::VectorXd Environment::observation_offset() const {
  return Eigen::VectorXd::Zero(observation_dim());
}

Eigen::VectorXd Environment::observation_scale() const {
  return Eigen::VectorXd::Ones(observation_dim());
}

Eigen::VectorXd Environment::feedforward() const {
  return Eigen::VectorXd::Zero(model_.n_joints());
}

void Environment::record_draw(std::string name, double value) {
  draws_.push_back({std::move(name), state_.time, value});
}

Eigen::VectorXd Environment::reset(std::uint64_t seed) {
  rng_.seed(seed);
  draws_.clear();
  steps_ = 0;
  done_ = false;
  state_ = EnvState{};
  reset_task(rng_);
  state_.time = 0.0;
  prev_torque_ = Eigen::VectorXd::Zero(model_.n_joints());
  return observe();
}

StepResult Environment::step(const ControlCommand& cmd) {
  if (done_) throw Error("step called on a finished episode; call reset first");
  if (parametrization_of(cmd) != codec_.parametrization) {
    throw MismatchError(fmt::format("environment runs {} control, got a {} command",
                                    to_string(codec_.parametrization),
                                    to_string(parametrization_of(cmd))));
  }
  const int n = model_.n_joints();
  const Eigen::VectorXd limits = codec_.torque_limits;

  StepInfo info;
  info.q_des = desired_positions(cmd);
  if (codec_.parametrization == Parametrization::kFixedGainPD) {
    info.kp = gains_.kp_fixed;
  } else if (const auto* v = std::get_if<VariableGainCommand>(&cmd)) {
    info.kp = v->kp.cwiseMax(gains_.kp_min).cwiseMin(gains_.kp_max);
  }

  Eigen::VectorXd torque_sum = Eigen::VectorXd::Zero(n);
  int substeps = 0;
  try {
    for (int s = 0; s < sim_.decimation; ++s) {
      Eigen::VectorXd tau =
          compute_torque(cmd, gains_, joint_positions(), joint_velocities(), limits);
      tau = (tau + feedforward()).cwiseMax(-limits).cwiseMin(limits);
      state_ = vic::step(model_, state_, tau, contact_, sim_.dt);
      torque_sum += tau;
      ++substeps;
      double total = 0.0;
      for (const auto& c : state_.contacts) total += c.normal_force;
      info.peak_force = std::max(info.peak_force, total);
      info.tip_forces.push_back(normal_force_on(state_, model_.dof() - 1));
      after_substep();
    }
  } catch (const SimulationDiverged&) {
    info.diverged = true;
  } catch (const InvalidState&) {
    info.diverged = true;
  }
  info.torque = substeps > 0 ? Eigen::VectorXd(torque_sum / substeps) : prev_torque_;

  const int tip = model_.dof() - 1;
  for (const auto& c : state_.contacts) {
    if (c.body_id == tip) {
      info.tip_force += c.normal_force;
      info.tip_in_contact = true;
    } else {
      info.other_force += c.normal_force;
    }
  }
  info.tracking_error = info.q_des.size() > 0 ? (info.q_des - joint_positions()).norm()
                                              : std::numeric_limits<double>::quiet_NaN();

  StepResult result;
  result.reward = reward(info, info.q_des);
  result.reward.add("failure", info.diverged ? -sim_.failure_penalty : 0.0);
  ++steps_;
  result.terminal = info.diverged || steps_ >= sim_.horizon_steps();
  done_ = result.terminal;
  prev_torque_ = info.torque;
  result.observation = observe();
  result.info = std::move(info);
  return result;
}

}  // namespace vic

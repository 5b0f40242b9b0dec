#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vic/control/controllers.hpp"
#include "vic/dynamics/contact.hpp"
#include "vic/dynamics/robot_model.hpp"
#include "vic/dynamics/simulator.hpp"
#include "vic/envs/rewards.hpp"

namespace vic {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double sample(std::mt19937_64& rng) const;
  double mid() const { return 0.5 * (lo + hi); }
};

/// Which contact properties are randomized, and over which ranges. Inactive variables
/// stay at the range midpoint.
struct UncertaintySpec {
  Range ground_height{-0.05, 0.05};  // m, hopper
  Range table_height{0.8, 1.0};      // m
  Range friction{0.0, 1.0};
  Range stiffness{50.0, 500.0};      // N/m
  bool ground_height_active = true;
  bool table_height_active = false;
  bool friction_active = false;
  bool stiffness_active = false;

  void validate() const;
};

struct SimConfig {
  double dt = 1e-3;        // physics step, s
  int decimation = 10;     // physics steps per control step
  double horizon = 4.0;    // episode length, s
  double failure_penalty = 10.0;

  int horizon_steps() const;
  double control_dt() const { return dt * decimation; }
  void validate() const;
};

/// A value drawn from the environment RNG, logged so an episode can be replayed.
struct Draw {
  std::string name;
  double time = 0.0;
  double value = 0.0;
};

struct StepInfo {
  double peak_force = 0.0;        // largest total normal force over the substeps, N
  double tip_force = 0.0;         // foot / tool-tip normal force at the last substep, N
  double other_force = 0.0;       // normal force on all other links at the last substep, N
  bool tip_in_contact = false;
  std::vector<double> tip_forces;  // tip normal force after every substep, N
  double tracking_error = 0.0;    // ||q_des^t - q^{t+1}||, NaN without desired positions
  Eigen::VectorXd torque;         // mean applied torque over the substeps
  Eigen::VectorXd q_des;          // empty for torque control
  Eigen::VectorXd kp;             // per-joint stiffness in effect (empty for torque control)
  bool diverged = false;
};

struct StepResult {
  Eigen::VectorXd observation;
  RewardBreakdown reward;
  bool terminal = false;
  StepInfo info;
};

/// Episodic task driven by control commands at the control rate.
///
/// Each `step` holds the command for `decimation` physics steps, recomputing the torque
/// from the evolving (q, qdot) at physics rate, then scores the transition.
class Environment {
 public:
  Environment(RobotModel model, SimConfig sim, Parametrization parametrization,
              GainSchedule gains, TrackingPenaltyConfig tracking);
  virtual ~Environment() = default;

  virtual std::string_view id() const = 0;
  virtual int observation_dim() const = 0;

  /// Deterministic in `seed`.
  Eigen::VectorXd reset(std::uint64_t seed);
  StepResult step(const ControlCommand& cmd);
  StepResult step_raw(const Eigen::VectorXd& raw) { return step(codec_.decode(raw)); }

  const RobotModel& model() const { return model_; }
  const ActionCodec& codec() const { return codec_; }
  const GainSchedule& gains() const { return gains_; }
  const SimConfig& sim() const { return sim_; }
  const TrackingPenaltyConfig& tracking() const { return tracking_; }
  Parametrization parametrization() const { return codec_.parametrization; }
  const EnvState& state() const { return state_; }
  const ContactParams& contact() const { return contact_; }
  const std::vector<Draw>& draws() const { return draws_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }

  /// Actuated joint positions / velocities.
  Eigen::VectorXd joint_positions() const;
  Eigen::VectorXd joint_velocities() const;

  /// Names of the reward terms in the order they appear in every breakdown.
  virtual std::vector<std::string> reward_names() const = 0;

  /// Fixed affine normalization applied to observations before they reach a network:
  /// (obs - offset) / scale. Defaults to the identity.
  virtual Eigen::VectorXd observation_offset() const;
  virtual Eigen::VectorXd observation_scale() const;

 protected:
  virtual Eigen::VectorXd observe() const = 0;
  /// Sample per-episode variables and the initial state.
  virtual void reset_task(std::mt19937_64& rng) = 0;
  /// Generalized feed-forward added to the controller output (e.g. gravity compensation).
  virtual Eigen::VectorXd feedforward() const;
  /// Called after every physics step.
  virtual void after_substep() {}
  virtual RewardBreakdown reward(const StepInfo& info, const Eigen::VectorXd& q_des_prev) = 0;

  void record_draw(std::string name, double value);
  std::mt19937_64& rng() { return rng_; }

  RobotModel model_;
  SimConfig sim_;
  GainSchedule gains_;
  TrackingPenaltyConfig tracking_;
  ActionCodec codec_;
  ContactParams contact_;
  EnvState state_;
  Eigen::VectorXd prev_torque_;

 private:
  std::mt19937_64 rng_;
  std::vector<Draw> draws_;
  int steps_ = 0;
  bool done_ = true;
};

}  // namespace vic

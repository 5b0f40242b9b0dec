#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace vic {

/// Named per-step reward terms. `total` is the left-to-right sum of the terms.
class RewardBreakdown {
 public:
  void add(std::string name, double value);
  double total() const { return total_; }
  /// Throws vic::Error for an unknown name.
  double term(const std::string& name) const;
  const std::vector<std::pair<std::string, double>>& terms() const { return terms_; }

 private:
  std::vector<std::pair<std::string, double>> terms_;
  double total_ = 0.0;
};

struct TrackingPenaltyConfig {
  double k = 0.0;
  bool enabled = false;

  bool active() const { return enabled && k > 0.0; }
};

/// -k ||q_des^t - q^{t+1}||^2; zero when disabled or when there is no desired position.
double tracking_penalty(const TrackingPenaltyConfig& cfg, const Eigen::VectorXd& q_des_prev,
                        const Eigen::VectorXd& q_next);

struct HopperRewardWeights {
  double height = 2.0;           // per metre of base height above ground
  double flight_bonus = 1.0;     // paid when the base is above the standing threshold
  double standing_height = 0.32; // fully stretched base height, m
  double bonus_margin = 0.01;    // threshold = standing_height + margin
  double impact = 1e-3;          // per N^2 above the threshold
  double force_threshold = 30.0; // N
  double smoothness = 0.05;      // per (N m)^2 of torque change
};

struct HopperRewardInput {
  double base_height = 0.0;   // above the current ground, m
  double peak_force = 0.0;    // largest total normal force during the control step, N
  Eigen::VectorXd torque;     // applied this control step (mean over substeps)
  Eigen::VectorXd prev_torque;
  Eigen::VectorXd q_des_prev; // empty for torque control
  Eigen::VectorXd q_next;     // actuated positions after the step
};

/// Terms: height, impact_penalty, torque_smoothness, tracking_penalty.
RewardBreakdown hopper_reward(const HopperRewardInput& in, const HopperRewardWeights& w,
                              const TrackingPenaltyConfig& tracking);

/// Circle on the table plane (x, y) traced at constant angular speed.
/// Positive `angular_speed` is counter-clockwise.
struct CircleSpec {
  Eigen::Vector2d center{0.7, 0.0};
  double radius = 0.1;
  double angular_speed = 1.5707963267948966;  // rad/s
  double desired_force = 3.0;                 // N, normal to the table
};

struct CirclePoint {
  Eigen::Vector2d point;
  Eigen::Vector2d tangent;  // unit, oriented by the rotation sense
};

/// Closest point on the circle to `p`. For p at the centre the angle-0 point
/// (center + radius * x) is returned.
CirclePoint closest_point_on_circle(const Eigen::Vector2d& p, const Eigen::Vector2d& center,
                                    double radius, bool counter_clockwise = true);

struct WiperRewardWeights {
  double distance = 10.0;        // per m from the circle
  double velocity = 3.0;         // per m/s of velocity error
  double orientation = 0.2;      // per rad of tool tilt away from the table normal
  double contact_bonus = 0.5;    // constant while the tool touches the table
  double force = 1.0;            // peak bonus at the desired force
  double bad_contact = 0.5;      // per N on links other than the tool tip
};

struct WiperRewardInput {
  Eigen::Vector2d tip_position = Eigen::Vector2d::Zero();  // table plane, m
  Eigen::Vector2d tip_velocity = Eigen::Vector2d::Zero();  // m/s
  double tool_tilt = 0.0;     // angle between the tool and the downward normal, rad
  double tip_force = 0.0;     // N
  bool tip_in_contact = false;
  double other_force = 0.0;   // N, summed over the other links
  Eigen::VectorXd q_des_prev;
  Eigen::VectorXd q_next;
};

/// Terms: circle_distance, tangential_velocity, orientation, contact_and_force,
/// bad_contact_penalty, tracking_penalty. No term depends on time.
RewardBreakdown wiper_reward(const WiperRewardInput& in, const CircleSpec& circle,
                             const WiperRewardWeights& w, const TrackingPenaltyConfig& tracking);

}  // namespace vic

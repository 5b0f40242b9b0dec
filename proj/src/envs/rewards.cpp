#include "vic/envs/rewards.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {

void RewardBreakdown::add(std::string name, double value) {
  terms_.emplace_back(std::move(name), value);
  total_ = 0.0;
  for (const auto& [_, v] : terms_) total_ += v;
}

double RewardBreakdown::term(const std::string& name) const {
  for (const auto& [n, v] : terms_) {
    if (n == name) return v;
  }
  throw Error(fmt::format("no reward term named '{}'", name));
}

double tracking_penalty(const TrackingPenaltyConfig& cfg, const Eigen::VectorXd& q_des_prev,
                        const Eigen::VectorXd& q_next) {
  if (!cfg.active() || q_des_prev.size() == 0) return 0.0;
  if (q_des_prev.size() != q_next.size()) {
    throw DimensionMismatch("tracking penalty: q_des and q differ in size");
  }
  return -cfg.k * (q_des_prev - q_next).squaredNorm();
}

RewardBreakdown hopper_reward(const HopperRewardInput& in, const HopperRewardWeights& w,
                              const TrackingPenaltyConfig& tracking) {
  RewardBreakdown r;
  const bool airborne = in.base_height > w.standing_height + w.bonus_margin;
  r.add("height", w.height * std::max(0.0, in.base_height) + (airborne ? w.flight_bonus : 0.0));
  const double excess = std::max(0.0, in.peak_force - w.force_threshold);
  r.add("impact_penalty", -w.impact * excess * excess);
  double smooth = 0.0;
  if (in.prev_torque.size() == in.torque.size()) {
    smooth = -w.smoothness * (in.torque - in.prev_torque).squaredNorm();
  }
  r.add("torque_smoothness", smooth);
  r.add("tracking_penalty", tracking_penalty(tracking, in.q_des_prev, in.q_next));
  return r;
}

CirclePoint closest_point_on_circle(const Eigen::Vector2d& p, const Eigen::Vector2d& center,
                                    double radius, bool counter_clockwise) {
  if (!(radius > 0.0)) throw ConfigError("radius", "must be > 0");
  const Eigen::Vector2d d = p - center;
  const double norm = d.norm();
  const Eigen::Vector2d radial = norm > 0.0 ? Eigen::Vector2d(d / norm) : Eigen::Vector2d::UnitX();
  CirclePoint cp;
  cp.point = center + radius * radial;
  cp.tangent = Eigen::Vector2d(-radial.y(), radial.x());
  if (!counter_clockwise) cp.tangent = -cp.tangent;
  return cp;
}

RewardBreakdown wiper_reward(const WiperRewardInput& in, const CircleSpec& circle,
                             const WiperRewardWeights& w, const TrackingPenaltyConfig& tracking) {
  const CirclePoint cp = closest_point_on_circle(in.tip_position, circle.center, circle.radius,
                                                 circle.angular_speed >= 0.0);
  const Eigen::Vector2d v_des = std::abs(circle.angular_speed) * circle.radius * cp.tangent;

  RewardBreakdown r;
  r.add("circle_distance", -w.distance * (in.tip_position - cp.point).norm());
  r.add("tangential_velocity", -w.velocity * (in.tip_velocity - v_des).norm());
  r.add("orientation", -w.orientation * std::abs(in.tool_tilt));
  double contact = 0.0;
  if (in.tip_in_contact) {
    const double rel = std::abs(in.tip_force - circle.desired_force) / circle.desired_force;
    contact = w.contact_bonus + w.force * std::max(0.0, 1.0 - rel);
  }
  r.add("contact_and_force", contact);
  r.add("bad_contact_penalty", -w.bad_contact * std::max(0.0, in.other_force));
  r.add("tracking_penalty", tracking_penalty(tracking, in.q_des_prev, in.q_next));
  return r;
}

}  // namespace vic

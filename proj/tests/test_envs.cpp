#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vic/dynamics/kinematics.hpp"
#include "vic/envs/hopper.hpp"
#include "vic/envs/point_mass.hpp"
#include "vic/envs/rewards.hpp"
#include "vic/envs/wiper.hpp"
#include "vic/error.hpp"

namespace vic {
namespace {

Eigen::VectorXd random_raw(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

void expect_exact_sum(const RewardBreakdown& r) {
  double s = 0.0;
  for (const auto& [_, v] : r.terms()) s += v;
  EXPECT_EQ(s, r.total());
}

TEST(Rewards, BreakdownSum) {
  RewardBreakdown r;
  r.add("a", 0.1);
  r.add("b", 0.2);
  r.add("c", -0.3);
  expect_exact_sum(r);
  EXPECT_EQ(r.term("b"), 0.2);
  EXPECT_THROW(r.term("d"), Error);
}

TEST(Rewards, TrackingPenalty) {
  TrackingPenaltyConfig off;
  TrackingPenaltyConfig on{2.0, true};
  const Eigen::Vector2d a(0.1, 0.2), b(0.3, 0.2);
  EXPECT_EQ(tracking_penalty(off, a, b), 0.0);
  EXPECT_EQ(tracking_penalty(on, a, a), 0.0);
  EXPECT_NEAR(tracking_penalty(on, a, b), -2.0 * 0.04, 1e-15);
  EXPECT_LT(tracking_penalty(on, a, b), 0.0);
  EXPECT_EQ(tracking_penalty(on, Eigen::VectorXd(), b), 0.0);
}

TEST(Rewards, HopperAtRest) {
  HopperRewardWeights w;
  HopperRewardInput in;
  in.base_height = 0.25;
  in.peak_force = w.force_threshold * 0.5;
  in.torque = Eigen::Vector2d(0.3, -0.2);
  in.prev_torque = in.torque;
  const RewardBreakdown r = hopper_reward(in, w, {});
  EXPECT_EQ(r.total(), w.height * 0.25);
  EXPECT_EQ(r.term("impact_penalty"), 0.0);
  EXPECT_EQ(r.term("torque_smoothness"), 0.0);
  EXPECT_EQ(r.term("tracking_penalty"), 0.0);
  expect_exact_sum(r);
}

TEST(Rewards, HopperFlightBonusAndImpactRatio) {
  HopperRewardWeights w;
  HopperRewardInput in;
  in.base_height = w.standing_height + w.bonus_margin + 0.05;
  EXPECT_NEAR(hopper_reward(in, w, {}).term("height"), w.height * in.base_height + w.flight_bonus,
              1e-15);
  const double f = 40.0;
  in.peak_force = w.force_threshold + f;
  const double p1 = hopper_reward(in, w, {}).term("impact_penalty");
  in.peak_force = w.force_threshold + 2 * f;
  const double p2 = hopper_reward(in, w, {}).term("impact_penalty");
  EXPECT_LT(p1, 0.0);
  EXPECT_NEAR(p2 / p1, 4.0, 1e-12);
}

TEST(Rewards, HopperTrackingReached) {
  HopperRewardInput in;
  in.base_height = 0.3;
  in.q_des_prev = Eigen::Vector2d(0.4, -0.8);
  in.q_next = in.q_des_prev;
  const RewardBreakdown r = hopper_reward(in, {}, {5.0, true});
  EXPECT_EQ(r.term("tracking_penalty"), 0.0);
}

TEST(Rewards, ClosestPointExamples) {
  CirclePoint c = closest_point_on_circle({2, 0}, {0, 0}, 1.0);
  EXPECT_NEAR((c.point - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((c.tangent - Eigen::Vector2d(0, 1)).norm(), 0.0, 1e-15);
  c = closest_point_on_circle({2, 0}, {0, 0}, 1.0, false);
  EXPECT_NEAR((c.tangent - Eigen::Vector2d(0, -1)).norm(), 0.0, 1e-15);
  const Eigen::Vector2d on(std::cos(0.7), std::sin(0.7));
  EXPECT_NEAR((closest_point_on_circle(on, {0, 0}, 1.0).point - on).norm(), 0.0, 1e-15);
  c = closest_point_on_circle({0.3, -0.2}, {0.3, -0.2}, 0.5);
  EXPECT_NEAR((c.point - Eigen::Vector2d(0.8, -0.2)).norm(), 0.0, 1e-15);
  EXPECT_THROW(closest_point_on_circle({1, 1}, {0, 0}, 0.0), Error);
}

TEST(Rewards, ClosestPointBruteForce) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector2d center(u(rng), u(rng)), p(u(rng), u(rng));
    const double r = 0.1 + std::abs(u(rng));
    const CirclePoint c = closest_point_on_circle(p, center, r);
    EXPECT_NEAR((c.point - center).norm(), r, 1e-12);
    EXPECT_NEAR(c.tangent.norm(), 1.0, 1e-12);
    EXPECT_NEAR(c.tangent.dot(c.point - center), 0.0, 1e-12);
    const double best = (c.point - p).norm();
    for (int i = 0; i < 360; ++i) {
      const double a = 2.0 * M_PI * i / 360.0;
      const Eigen::Vector2d x = center + r * Eigen::Vector2d(std::cos(a), std::sin(a));
      EXPECT_LE(best, (x - p).norm() + 1e-12);
    }
  }
}

WiperRewardInput ideal_wiper_input(const CircleSpec& circle) {
  WiperRewardInput in;
  in.tip_position = circle.center + circle.radius * Eigen::Vector2d(0.0, 1.0);
  in.tip_velocity = circle.angular_speed * circle.radius * Eigen::Vector2d(-1.0, 0.0);
  in.tool_tilt = 0.0;
  in.tip_force = circle.desired_force;
  in.tip_in_contact = true;
  in.other_force = 0.0;
  return in;
}

TEST(Rewards, WiperIdeal) {
  const CircleSpec circle;
  const WiperRewardWeights w;
  const RewardBreakdown r = wiper_reward(ideal_wiper_input(circle), circle, w, {1.0, true});
  EXPECT_NEAR(r.term("circle_distance"), 0.0, 1e-15);
  EXPECT_NEAR(r.term("tangential_velocity"), 0.0, 1e-14);
  EXPECT_EQ(r.term("orientation"), 0.0);
  EXPECT_EQ(r.term("contact_and_force"), w.contact_bonus + w.force);
  EXPECT_EQ(r.term("bad_contact_penalty"), 0.0);
  EXPECT_EQ(r.term("tracking_penalty"), 0.0);
  expect_exact_sum(r);
}

TEST(Rewards, WiperCenterAndBadContact) {
  const CircleSpec circle;
  const WiperRewardWeights w;
  WiperRewardInput in = ideal_wiper_input(circle);
  in.tip_position = circle.center;
  EXPECT_NEAR(wiper_reward(in, circle, w, {}).term("circle_distance"),
              -w.distance * circle.radius, 1e-15);

  WiperRewardInput base = ideal_wiper_input(circle);
  WiperRewardInput bad = base;
  bad.other_force = 1.0;
  const RewardBreakdown a = wiper_reward(base, circle, w, {});
  const RewardBreakdown b = wiper_reward(bad, circle, w, {});
  EXPECT_LT(b.term("bad_contact_penalty"), 0.0);
  for (const auto& [name, v] : a.terms()) {
    if (name != "bad_contact_penalty") EXPECT_EQ(v, b.term(name)) << name;
  }
}

TEST(Rewards, WiperSigns) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const CircleSpec circle;
  const WiperRewardWeights w;
  for (int k = 0; k < 1000; ++k) {
    WiperRewardInput in;
    in.tip_position = Eigen::Vector2d(0.7 + 0.3 * u(rng), 0.3 * u(rng));
    in.tip_velocity = Eigen::Vector2d(u(rng), u(rng));
    in.tool_tilt = std::abs(u(rng));
    in.tip_force = 10.0 * std::abs(u(rng));
    in.tip_in_contact = u(rng) > 0.0;
    in.other_force = std::max(0.0, 5.0 * u(rng));
    in.q_des_prev = Eigen::Vector3d(u(rng), u(rng), u(rng));
    in.q_next = Eigen::Vector3d(u(rng), u(rng), u(rng));
    const RewardBreakdown r = wiper_reward(in, circle, w, {0.5, true});
    EXPECT_LE(r.term("circle_distance"), 0.0);
    EXPECT_LE(r.term("tangential_velocity"), 0.0);
    EXPECT_LE(r.term("orientation"), 0.0);
    EXPECT_GE(r.term("contact_and_force"), 0.0);
    EXPECT_LE(r.term("bad_contact_penalty"), 0.0);
    EXPECT_LE(r.term("tracking_penalty"), 0.0);
    expect_exact_sum(r);
  }
}

TEST(Uncertainty, Validate) {
  UncertaintySpec u;
  EXPECT_NO_THROW(u.validate());
  u.friction = {0.7, 0.2};
  try {
    u.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lo > hi"), std::string::npos);
    EXPECT_NE(e.field().find("friction"), std::string::npos);
  }
}

TEST(HopperEnv, DeterministicReset) {
  HopperEnv a({}, Parametrization::kVariableGainPD, GainSchedule::uniform(2, 5.0, 0.1));
  HopperEnv b({}, Parametrization::kVariableGainPD, GainSchedule::uniform(2, 5.0, 0.1));
  EXPECT_EQ(a.reset(42), b.reset(42));
  EXPECT_EQ(a.ground_height(), b.ground_height());
  EXPECT_NE(a.reset(43), b.reset(42));
}

TEST(HopperEnv, GroundExactlyZeroWhenInactive) {
  HopperConfig cfg;
  cfg.uncertainty.ground_height_active = false;
  HopperEnv env(cfg, Parametrization::kTorque, GainSchedule::uniform(2, 5.0, 0.1));
  std::mt19937_64 rng(1);
  for (std::uint64_t s = 0; s < 50; ++s) {
    env.reset(s);
    EXPECT_EQ(env.ground_height(), 0.0);
    for (int k = 0; k < 100 && !env.done(); ++k) {
      env.step_raw(random_raw(2, rng));
      EXPECT_EQ(env.ground_height(), 0.0);
    }
  }
}

TEST(HopperEnv, GroundWithinRange) {
  HopperEnv env({}, Parametrization::kFixedGainPD, GainSchedule::uniform(2, 5.0, 0.1));
  std::mt19937_64 rng(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    env.reset(s);
    while (!env.done()) {
      env.step_raw(random_raw(2, rng));
      EXPECT_GE(env.ground_height(), -0.05);
      EXPECT_LE(env.ground_height(), 0.05);
    }
  }
}

TEST(HopperEnv, ObservationHasNoContactInformation) {
  HopperEnv env({}, Parametrization::kTorque, GainSchedule::uniform(2, 5.0, 0.1));
  EXPECT_EQ(env.observation_dim(), 6);
  env.reset(3);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const StepResult r = env.step_raw(random_raw(2, rng));
    const EnvState& s = env.state();
    Eigen::VectorXd expected(6);
    expected << s.q[0], s.qdot[0], s.q[1], s.q[2], s.qdot[1], s.qdot[2];
    EXPECT_EQ(r.observation, expected);
  }
}

class EnvSweep : public ::testing::TestWithParam<std::tuple<int, Parametrization>> {
 protected:
  std::unique_ptr<Environment> make() const {
    const auto [which, par] = GetParam();
    TrackingPenaltyConfig tr{0.5, true};
    if (which == 0) return std::make_unique<HopperEnv>(HopperConfig{}, par,
                                                       GainSchedule::uniform(2, 5.0, 0.1), tr);
    WiperConfig wc;
    wc.sim.horizon = 2.0;
    return std::make_unique<WiperEnv>(wc, par, GainSchedule::uniform(3, 5.0), tr);
  }
};

TEST_P(EnvSweep, HorizonRewardsLimitsAndTracking) {
  auto env = make();
  std::mt19937_64 rng(5);
  env->reset(17);
  int steps = 0;
  const auto names = env->reward_names();
  const Eigen::VectorXd lim = env->codec().torque_limits;
  while (!env->done()) {
    const StepResult r = env->step_raw(random_raw(env->codec().action_dim(), rng));
    ++steps;
    ASSERT_FALSE(r.info.diverged);
    expect_exact_sum(r.reward);
    ASSERT_EQ(r.reward.terms().size(), names.size());
    for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(r.reward.terms()[i].first, names[i]);
    EXPECT_TRUE(r.observation.allFinite());
    EXPECT_TRUE((r.info.torque.array().abs() <= lim.array() + 1e-12).all());
    if (env->parametrization() == Parametrization::kTorque) {
      EXPECT_EQ(r.reward.term("tracking_penalty"), 0.0);
      EXPECT_TRUE(std::isnan(r.info.tracking_error));
    }
    for (const auto& c : env->state().contacts) {
      EXPECT_GE(c.normal_force, 0.0);
      EXPECT_LE(c.tangential_force, env->contact().coulomb_friction * c.normal_force + 1e-9);
    }
  }
  EXPECT_EQ(steps, env->sim().horizon_steps());
}

TEST_P(EnvSweep, DeterministicEpisode) {
  auto a = make();
  auto b = make();
  a->reset(99);
  b->reset(99);
  std::mt19937_64 ra(6), rb(6);
  while (!a->done()) {
    const StepResult x = a->step_raw(random_raw(a->codec().action_dim(), ra));
    const StepResult y = b->step_raw(random_raw(b->codec().action_dim(), rb));
    ASSERT_EQ(x.observation, y.observation);
    ASSERT_EQ(x.reward.total(), y.reward.total());
  }
  EXPECT_TRUE(b->done());
}

INSTANTIATE_TEST_SUITE_P(
    All, EnvSweep,
    ::testing::Combine(::testing::Values(0, 1),
                       ::testing::Values(Parametrization::kTorque, Parametrization::kFixedGainPD,
                                         Parametrization::kVariableGainPD)));

TEST(WiperEnv, StiffnessSamplingStatistics) {
  WiperConfig cfg;
  cfg.uncertainty.stiffness_active = true;
  WiperEnv env(cfg, Parametrization::kVariableGainPD, GainSchedule::uniform(3, 5.0));
  double lo = 1e9, hi = -1e9, sum = 0.0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) {
    env.reset(static_cast<std::uint64_t>(s));
    const double k = env.contact().normal_stiffness;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    sum += k;
  }
  EXPECT_GE(lo, 50.0);
  EXPECT_LE(hi, 500.0);
  EXPECT_NEAR(sum / n, 275.0, 0.05 * 275.0);
}

TEST(WiperEnv, InactiveVariablesAtMidpoint) {
  WiperConfig cfg;
  cfg.uncertainty.friction_active = true;
  WiperEnv env(cfg, Parametrization::kTorque, GainSchedule::uniform(3, 5.0));
  for (std::uint64_t s = 0; s < 100; ++s) {
    env.reset(s);
    EXPECT_EQ(env.table_height(), 0.9);
    EXPECT_EQ(env.contact().normal_stiffness, 275.0);
  }
}

TEST(WiperEnv, HoldingPositionSettles) {
  WiperConfig cfg;
  cfg.uncertainty.table_height = {0.0, 0.0};
  WiperEnv env(cfg, Parametrization::kFixedGainPD, GainSchedule::uniform(3, 10.0));
  env.reset(4);
  const Eigen::VectorXd q0 = env.joint_positions();
  const int steps = static_cast<int>(std::lround(0.5 / env.sim().control_dt()));
  for (int k = 0; k < steps; ++k) env.step(FixedGainCommand{q0});
  EXPECT_LT(env.joint_velocities().norm(), 1e-3);
  EXPECT_TRUE(env.state().contacts.empty());
}

TEST(WiperEnv, GravityCompensationHoldsAtRest) {
  WiperConfig cfg;
  cfg.uncertainty.table_height = {0.0, 0.0};
  WiperEnv env(cfg, Parametrization::kTorque, GainSchedule::uniform(3, 5.0));
  env.reset(8);
  const Eigen::VectorXd q0 = env.joint_positions();
  env.step(TorqueCommand{Eigen::Vector3d::Zero()});
  EXPECT_LT((env.joint_positions() - q0).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(WiperEnv, ObservationCarriesTipForce) {
  WiperEnv env({}, Parametrization::kFixedGainPD, GainSchedule::uniform(3, 10.0));
  env.reset(1);
  // Press the tool down onto the table from above the circle.
  bool touched = false;
  for (int k = 0; k < 200; ++k) {
    const StepResult r = env.step(FixedGainCommand{Eigen::Vector3d(0.0, 0.0, 1.2)});
    EXPECT_EQ(r.observation[6], env.tip_force_magnitude());
    touched = touched || r.observation[6] > 0.0;
  }
  EXPECT_TRUE(touched);
}

TEST(PointMassEnv, Basics) {
  PointMassEnv env({}, Parametrization::kTorque, GainSchedule::uniform(1, 1.0));
  const Eigen::VectorXd o = env.reset(0);
  EXPECT_EQ(o.size(), 2);
  int steps = 0;
  double score = 0.0;
  while (!env.done()) {
    score += env.step_raw(Eigen::VectorXd::Ones(1)).reward.total();
    ++steps;
  }
  EXPECT_EQ(steps, 50);
  EXPECT_GT(score, 0.0);
}

}  // namespace
}  // namespace vic

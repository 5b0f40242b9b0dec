#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "vic/dynamics/contact.hpp"
#include "vic/dynamics/dynamics.hpp"
#include "vic/dynamics/kinematics.hpp"
#include "vic/dynamics/robot_model.hpp"
#include "vic/dynamics/simulator.hpp"
#include "vic/error.hpp"

namespace vic {
namespace {

Eigen::VectorXd random_q(const RobotModel& m, std::mt19937_64& rng) {
  Eigen::VectorXd q(m.dof());
  for (int i = 0; i < m.dof(); ++i) {
    std::uniform_real_distribution<double> u(m.links[i].lower, m.links[i].upper);
    q[i] = u(rng);
  }
  return q;
}

Eigen::VectorXd random_vec(int n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Kinetic energy from link velocities, independent of the recursive algorithm.
double oracle_kinetic_energy(const RobotModel& m, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& qdot) {
  const Kinematics kin = forward_kinematics(m, q);
  double e = 0.0;
  for (int i = 0; i < m.dof(); ++i) {
    const Eigen::Vector3d v = point_jacobian(m, kin, i, kin.links[i].com) * qdot;
    const Eigen::Vector3d w = angular_jacobian(m, kin, i) * qdot;
    e += 0.5 * m.links[i].mass * v.squaredNorm() + 0.5 * m.links[i].inertia * w.squaredNorm();
    e += 0.5 * m.links[i].armature * qdot[i] * qdot[i];
  }
  return e;
}

double oracle_potential(const RobotModel& m, const Eigen::VectorXd& q) {
  const Kinematics kin = forward_kinematics(m, q);
  double e = 0.0;
  for (int i = 0; i < m.dof(); ++i) e -= m.links[i].mass * m.gravity.dot(kin.links[i].com);
  return e;
}

class PresetTest : public ::testing::TestWithParam<int> {
 protected:
  RobotModel model() const { return GetParam() == 0 ? hopper_preset() : arm_preset(); }
};

TEST_P(PresetTest, MassMatrixSymmetricPositiveDefinite) {
  const RobotModel m = model();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::MatrixXd M = mass_matrix(m, q);
    EXPECT_EQ((M - M.transpose()).cwiseAbs().maxCoeff(), 0.0);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    ASSERT_EQ(llt.info(), Eigen::Success);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    if (!m.base_fixed) EXPECT_GE(M(0, 0), m.total_mass() - 1e-12);
  }
}

TEST_P(PresetTest, MassMatrixMatchesKineticEnergyHessian) {
  const RobotModel m = model();
  std::mt19937_64 rng(11);
  const double h = 1e-3;
  for (int k = 0; k < 50; ++k) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::MatrixXd M = mass_matrix(m, q);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(m.dof());
    for (int i = 0; i < m.dof(); ++i) {
      for (int j = 0; j < m.dof(); ++j) {
        auto ke = [&](double di, double dj) {
          Eigen::VectorXd v = v0;
          v[i] += di;
          v[j] += dj;
          return oracle_kinetic_energy(m, q, v);
        };
        const double hess = (ke(h, h) - ke(h, -h) - ke(-h, h) + ke(-h, -h)) / (4 * h * h);
        EXPECT_NEAR(M(i, j), hess, 1e-6 * (1.0 + std::abs(hess)));
      }
    }
    const Eigen::VectorXd qd = random_vec(m.dof(), 2.0, rng);
    EXPECT_NEAR(kinetic_energy(m, q, qd), oracle_kinetic_energy(m, q, qd), 1e-10);
  }
}

TEST_P(PresetTest, GravityTorqueIsPotentialGradient) {
  const RobotModel m = model();
  std::mt19937_64 rng(13);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::VectorXd g = gravity_torque(m, q);
    const Eigen::VectorXd id = inverse_dynamics(m, q, Eigen::VectorXd::Zero(m.dof()),
                                                Eigen::VectorXd::Zero(m.dof()));
    EXPECT_LT((g - id).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(gravity_potential(m, q), oracle_potential(m, q), 1e-10);
    for (int i = 0; i < m.dof(); ++i) {
      Eigen::VectorXd qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const double fd = (oracle_potential(m, qp) - oracle_potential(m, qm)) / (2 * h);
      EXPECT_NEAR(g[i], fd, 1e-6);
    }
  }
}

// Lagrange's equations: d/dt(dT/dqdot) - dT/dq + dV/dq = tau, with the time derivative
// taken by finite differences along qddot.
TEST_P(PresetTest, InverseDynamicsMatchesLagrangian) {
  const RobotModel m = model();
  std::mt19937_64 rng(17);
  const double h = 1e-5;
  for (int k = 0; k < 30; ++k) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::VectorXd qd = random_vec(m.dof(), 2.0, rng);
    const Eigen::VectorXd qdd = random_vec(m.dof(), 5.0, rng);
    auto momentum = [&](const Eigen::VectorXd& qq, const Eigen::VectorXd& vv) {
      return Eigen::VectorXd(mass_matrix(m, qq) * vv);
    };
    const Eigen::VectorXd p_dot =
        (momentum(q + h * qd, qd + h * qdd) - momentum(q - h * qd, qd - h * qdd)) / (2 * h);
    Eigen::VectorXd dT(m.dof());
    for (int i = 0; i < m.dof(); ++i) {
      Eigen::VectorXd qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      dT[i] = (oracle_kinetic_energy(m, qp, qd) - oracle_kinetic_energy(m, qm, qd)) / (2 * h);
    }
    const Eigen::VectorXd expected = p_dot - dT + gravity_torque(m, q);
    const Eigen::VectorXd got = inverse_dynamics(m, q, qd, qdd);
    EXPECT_LT((expected - got).cwiseAbs().maxCoeff(), 1e-5 * (1.0 + got.cwiseAbs().maxCoeff()));
  }
}

INSTANTIATE_TEST_SUITE_P(Presets, PresetTest, ::testing::Values(0, 1));

TEST(Kinematics, ArmStretched) {
  const RobotModel m = arm_preset();
  const double reach = 0.35 + 0.30 + 0.50;
  Kinematics k = forward_kinematics(m, Eigen::Vector3d::Zero());
  EXPECT_NEAR(k.end_point().x(), reach, 1e-12);
  EXPECT_NEAR(k.end_point().y(), 0.0, 1e-12);
  EXPECT_NEAR(k.end_point().z(), 1.25, 1e-12);
  k = forward_kinematics(m, Eigen::Vector3d(M_PI / 2, 0.0, 0.0));
  EXPECT_NEAR(k.end_point().x(), 0.0, 1e-12);
  EXPECT_NEAR(k.end_point().y(), reach, 1e-12);
}

TEST(Kinematics, HopperStraightLeg) {
  const RobotModel m = hopper_preset();
  const Kinematics k = forward_kinematics(m, Eigen::Vector3d(0.5, 0.0, 0.0));
  EXPECT_NEAR(k.end_point().z(), 0.5 - 0.32, 1e-12);
  EXPECT_NEAR(k.end_point().x(), 0.0, 1e-12);
}

TEST(Kinematics, RejectsInvalidState) {
  const RobotModel m = arm_preset();
  EXPECT_THROW(forward_kinematics(m, Eigen::Vector3d(NAN, 0, 0)), InvalidState);
  EXPECT_THROW(forward_kinematics(m, Eigen::Vector3d(100.0, 0, 0)), InvalidState);
  try {
    forward_kinematics(m, Eigen::Vector3d(INFINITY, 0, 0));
  } catch (const InvalidState& e) {
    EXPECT_NE(std::string(e.what()).find("invalid state"), std::string::npos);
  }
}

TEST(Kinematics, EndPointContinuous) {
  const RobotModel m = arm_preset();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd q = random_q(m, rng);
    const Eigen::VectorXd dq = random_vec(3, 1e-7, rng);
    const double d =
        (forward_kinematics(m, q + dq).end_point() - forward_kinematics(m, q).end_point()).norm();
    EXPECT_LT(d, 1e-6);
  }
}

TEST(Dynamics, PendulumValues) {
  const double l = 0.8, m = 1.3, c = 0.35, I = 0.02;
  const RobotModel p = pendulum_model(l, m, c, I);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, 0.7);
  EXPECT_NEAR(mass_matrix(p, q)(0, 0), m * c * c + I, 1e-12);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd tau = inverse_dynamics(p, zero, zero, zero);
  EXPECT_NEAR(std::abs(tau[0]), m * 9.81 * c, 1e-12);
}

TEST(Contact, Examples) {
  ContactParams p;
  p.normal_stiffness = 500.0;
  p.normal_damping = 5.0;
  p.coulomb_friction = 0.5;
  ContactForce f = contact_force(0.01, 0.0, 0.0, p);
  EXPECT_EQ(f.normal, 0.0);
  EXPECT_EQ(f.tangential, 0.0);
  f = contact_force(-0.01, 0.0, 0.0, p);
  EXPECT_NEAR(f.normal, 5.0, 1e-12);
  EXPECT_EQ(f.tangential, 0.0);
  // 0.02 m penetration gives 10 N; fast sliding saturates at -mu N.
  f = contact_force(-0.02, 0.0, 100.0, p);
  EXPECT_NEAR(f.normal, 10.0, 1e-12);
  EXPECT_NEAR(f.tangential, -5.0, 1e-2);
  EXPECT_GE(f.tangential, -5.0);
  f = contact_force(-0.02, 0.0, -1e3, p);
  EXPECT_NEAR(f.tangential, 5.0, 1e-4);
  // Separating fast enough: damping cannot pull.
  f = contact_force(-0.001, 10.0, 0.0, p);
  EXPECT_EQ(f.normal, 0.0);
}

TEST(Contact, ConeAndUnilateral) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ContactParams p;
  for (int k = 0; k < 10000; ++k) {
    p.normal_stiffness = 50.0 + 1e4 * (u(rng) + 1.0);
    p.normal_damping = 50.0 * (u(rng) + 1.0);
    p.coulomb_friction = u(rng) + 1.0;
    const ContactForce f = contact_force(0.05 * u(rng), 2.0 * u(rng), 2.0 * u(rng), p);
    EXPECT_GE(f.normal, 0.0);
    EXPECT_LE(std::abs(f.tangential), p.coulomb_friction * f.normal + 1e-12);
  }
}

TEST(Contact, ParamsValidate) {
  ContactParams p;
  p.normal_stiffness = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.coulomb_friction = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.tangential_regularization_velocity = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Simulator, ZeroGravityEquilibrium) {
  RobotModel m = arm_preset();
  m.gravity.setZero();
  EnvState s = make_state(m, Eigen::Vector3d(0.3, -0.5, 0.1));
  ContactParams p;
  p.surface_height = -10.0;
  const EnvState n = step(m, s, Eigen::Vector3d::Zero(), p, 1e-3);
  EXPECT_EQ(n.q, s.q);
  EXPECT_EQ(n.qdot, s.qdot);
}

TEST(Simulator, HopperFreeFall) {
  const RobotModel m = hopper_preset();
  EnvState s = make_state(m, Eigen::Vector3d(2.0, 0.0, 0.0));
  ContactParams p;
  const double dt = 1e-3;
  for (int k = 0; k < 500; ++k) s = step(m, s, Eigen::Vector2d::Zero(), p, dt);
  const double t = 500 * dt;
  EXPECT_NEAR(s.time, t, 1e-12);
  EXPECT_NEAR(s.q[0], 2.0 - 0.5 * 9.81 * t * t, 9.81 * t * dt);
  EXPECT_NEAR(s.q[1], 0.0, 1e-12);
}

TEST(Simulator, Deterministic) {
  const RobotModel m = hopper_preset();
  ContactParams p;
  EnvState a = make_state(m, Eigen::Vector3d(0.35, 0.3, -0.6));
  EnvState b = a;
  for (int k = 0; k < 2000; ++k) {
    const Eigen::Vector2d tau(std::sin(k * 0.01), std::cos(k * 0.02));
    a = step(m, a, tau, p, 1e-3);
    b = step(m, b, tau, p, 1e-3);
  }
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.qdot, b.qdot);
}

TEST(Simulator, TorqueClamped) {
  RobotModel m = pendulum_model(0.5, 1.0, 0.25, 0.01);
  m.gravity.setZero();
  m.torque_limits = {2.0};
  ContactParams p;
  p.surface_height = -10.0;
  EnvState s = make_state(m, Eigen::VectorXd::Zero(1));
  const EnvState a = step(m, s, Eigen::VectorXd::Constant(1, 2.0), p, 1e-3);
  const EnvState b = step(m, s, Eigen::VectorXd::Constant(1, 50.0), p, 1e-3);
  EXPECT_EQ(a.qdot, b.qdot);
}

TEST(Simulator, DivergenceReported) {
  const RobotModel m = hopper_preset();
  ContactParams p;
  EnvState s = make_state(m, Eigen::Vector3d(0.5, 0.0, 0.0));
  s.qdot[0] = NAN;
  EXPECT_THROW(step(m, s, Eigen::Vector2d::Zero(), p, 1e-3), Error);
}

// Energy balance along a contact-free trajectory with torques and joint damping:
// E(t+dt) - E(t) ~ dt * qdot^T (tau - D qdot).
TEST(Simulator, EnergyRateMatchesPower) {
  RobotModel m = arm_preset();
  ContactParams p;
  p.surface_height = -10.0;
  EnvState s = make_state(m, Eigen::Vector3d(0.2, 0.4, 0.5));
  const double dt = 1e-4;
  double work = 0.0;
  const double e0 = mechanical_energy(m, s, p);
  for (int k = 0; k < 5000; ++k) {
    const Eigen::Vector3d tau(2.0 * std::sin(k * 1e-3), -1.0, 0.5 * std::cos(k * 2e-3));
    const EnvState n = step(m, s, tau, p, dt);
    Eigen::VectorXd damp(3);
    for (int i = 0; i < 3; ++i) damp[i] = m.links[i].damping * n.qdot[i];
    const Eigen::VectorXd v = 0.5 * (s.qdot + n.qdot);
    work += dt * v.dot(tau - damp);
    s = n;
  }
  const double e1 = mechanical_energy(m, s, p);
  EXPECT_NEAR(e1 - e0, work, 2e-3 * (std::abs(work) + 1.0));
}

struct DropResult {
  double peak = 0.0;
  double max_rise_rel = 0.0;
  bool cone_ok = true;
  bool unilateral_ok = true;
};

DropResult drop_hopper(double stiffness, double mu, double dt, int steps, double tilt) {
  RobotModel m = hopper_preset();
  ContactParams p;
  p.normal_stiffness = stiffness;
  p.normal_damping = ContactParams::damping_for(stiffness, m.total_mass());
  p.coulomb_friction = mu;
  EnvState s = make_state(m, Eigen::Vector3d(0.42, tilt, -2.0 * tilt));
  DropResult r;
  const double e0 = mechanical_energy(m, s, p);
  double prev = e0;
  for (int k = 0; k < steps; ++k) {
    s = step(m, s, Eigen::Vector2d::Zero(), p, dt);
    double total = 0.0;
    for (const auto& c : s.contacts) {
      if (c.normal_force < 0.0) r.unilateral_ok = false;
      if (c.tangential_force > p.coulomb_friction * c.normal_force + 1e-9) r.cone_ok = false;
      total += c.normal_force;
    }
    r.peak = std::max(r.peak, total);
    const double e = mechanical_energy(m, s, p);
    r.max_rise_rel = std::max(r.max_rise_rel, (e - prev) / std::abs(e0));
    prev = e;
  }
  return r;
}

TEST(Simulator, PeakForceGrowsWithStiffness) {
  const double f50 = drop_hopper(50.0, 1.0, 1e-3, 3000, 0.0).peak;
  const double f200 = drop_hopper(200.0, 1.0, 1e-3, 3000, 0.0).peak;
  const double f500 = drop_hopper(500.0, 1.0, 1e-3, 3000, 0.0).peak;
  EXPECT_LT(f50, f200);
  EXPECT_LT(f200, f500);
}

TEST(Simulator, PassiveDropDissipates) {
  for (double k : {50.0, 500.0, 1e4}) {
    for (double tilt : {0.0, 0.3}) {
      const DropResult r = drop_hopper(k, 0.8, 1e-3, 3000, tilt);
      EXPECT_LE(r.max_rise_rel, 1e-6) << "k=" << k << " tilt=" << tilt;
      EXPECT_TRUE(r.cone_ok);
      EXPECT_TRUE(r.unilateral_ok);
    }
  }
}

}  // namespace
}  // namespace vic

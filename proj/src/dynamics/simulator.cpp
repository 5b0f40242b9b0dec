#include "vic/dynamics/simulator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <fmt/format.h>

#include "vic/dynamics/dynamics.hpp"
#include "vic/dynamics/kinematics.hpp"
#include "vic/error.hpp"

namespace vic {
namespace {

constexpr int kMaxSweeps = 50;

// One-sided spring-damper along the velocity-space row `dir`. Spring and damper are
// evaluated at the end-of-step velocity:
//   f = max(0, k (gap0 - dt u+) - c u+),  u+ = dir . v+.
struct UnilateralRow {
  Eigen::VectorXd dir;
  Eigen::VectorXd ainv_dir;
  double w = 0.0;
  double gap0 = 0.0;
  double k = 0.0;
  double c = 0.0;
  double force = 0.0;
};

// Regularized Coulomb friction attached to a contact row.
struct FrictionRow {
  int normal_row = -1;
  Eigen::MatrixXd jac_t;  // 2 x dof
  Eigen::VectorXd ainv_dir;
  double force = 0.0;  // magnitude, applied along -ainv_dir
};

// Projected Gauss-Seidel over the unilateral and friction rows; all rows share the
// implicit-velocity system matrix A = M + dt B.
void solve_rows(const Eigen::LDLT<Eigen::MatrixXd>& solver, double dt, double mu, double vr,
                std::vector<UnilateralRow>& rows, std::vector<FrictionRow>& friction,
                Eigen::VectorXd& v) {
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double change = 0.0;
    for (auto& r : rows) {
      const double stiff = r.k * dt + r.c;
      const double u = r.dir.dot(v) - dt * r.w * r.force;
      const double f = std::max(0.0, (r.k * r.gap0 - stiff * u) / (1.0 + stiff * dt * r.w));
      const double df = f - r.force;
      if (df != 0.0) {
        v += r.ainv_dir * (dt * df);
        change = std::max(change, std::abs(df) * r.w * dt);
        r.force = f;
      }
    }
    for (auto& fr : friction) {
      const double old = fr.force;
      if (old != 0.0) v += fr.ainv_dir * (dt * old);
      fr.force = 0.0;
      const double mun = mu * rows[fr.normal_row].force;
      const Eigen::Vector2d vt = fr.jac_t * v;
      const double slip = vt.norm();
      if (mun > 0.0 && slip > 0.0) {
        const Eigen::VectorXd jt = fr.jac_t.transpose() * (vt / slip);
        fr.ainv_dir = solver.solve(jt);
        const double w = jt.dot(fr.ainv_dir);
        const double linear = slip / (1.0 + dt * w * mun / vr);
        fr.force = linear <= vr ? mun * linear / vr : mun;
        v -= fr.ainv_dir * (dt * fr.force);
      }
      change = std::max(change, std::abs(fr.force - old) * dt * 1e-3);
    }
    if (change < 1e-13) break;
  }
}

}  // namespace

EnvState make_state(const RobotModel& model, const Eigen::VectorXd& q) {
  EnvState s;
  s.q = q;
  s.qdot = Eigen::VectorXd::Zero(model.dof());
  return s;
}

double normal_force_on(const EnvState& state, int link) {
  double f = 0.0;
  for (const auto& c : state.contacts) {
    if (c.body_id == link) f += c.normal_force;
  }
  return f;
}

EnvState step(const RobotModel& model, const EnvState& state, const Eigen::VectorXd& torque,
              const ContactParams& params, double dt) {
  if (!(dt > 0.0 && dt <= 0.01)) throw InvalidState(fmt::format("dt = {} outside (0, 0.01]", dt));
  const int n = model.dof();
  const int first = model.first_actuated();
  if (torque.size() != model.n_joints()) {
    throw DimensionMismatch(
        fmt::format("torque has {} entries, expected {}", torque.size(), model.n_joints()));
  }
  if (state.qdot.size() != n) throw InvalidState("qdot dimension does not match the model");

  const Kinematics kin = forward_kinematics(model, state.q);
  const Eigen::VectorXd& q = state.q;
  const Eigen::VectorXd& qd = state.qdot;

  Eigen::VectorXd tau = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < model.n_joints(); ++j) {
    const double lim = model.torque_limits[j];
    tau[first + j] = std::clamp(torque[j], -lim, lim);
  }

  Eigen::MatrixXd a = mass_matrix(model, q);
  Eigen::VectorXd damping(n);
  for (int i = 0; i < n; ++i) damping[i] = model.links[i].damping;
  a.diagonal() += dt * damping;
  const Eigen::LDLT<Eigen::MatrixXd> solver(a);

  const Eigen::VectorXd rhs = tau - bias_forces(model, q, qd) - damping.cwiseProduct(qd);
  Eigen::VectorXd v = qd + solver.solve(rhs) * dt;

  std::vector<UnilateralRow> rows;
  std::vector<FrictionRow> friction;
  auto add_row = [&](Eigen::VectorXd dir, double gap0, double k, double c) {
    UnilateralRow r;
    r.ainv_dir = solver.solve(dir);
    r.w = dir.dot(r.ainv_dir);
    r.dir = std::move(dir);
    r.gap0 = gap0;
    r.k = k;
    r.c = c;
    rows.push_back(std::move(r));
  };

  // Soft joint limits; the floating base coordinate has none. A row is only kept when
  // the limit is close enough to be reached within the step.
  for (int i = first; i < n; ++i) {
    const auto& l = model.links[i];
    const double reach = 2.0 * dt * std::abs(v[i]) + 1e-9;
    if (q[i] - l.upper > -reach) {
      add_row(-Eigen::VectorXd::Unit(n, i), q[i] - l.upper, model.limit_stiffness,
              model.limit_damping);
    }
    if (l.lower - q[i] > -reach) {
      add_row(Eigen::VectorXd::Unit(n, i), l.lower - q[i], model.limit_stiffness,
              model.limit_damping);
    }
  }

  std::vector<int> contact_link;
  std::vector<int> contact_row;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d& p = kin.links[i].tip;
    const double pen0 = params.surface_height - p.z();
    // Anything this far above the surface cannot reach it within one step.
    if (pen0 < -0.05) continue;
    const Eigen::MatrixXd jac = point_jacobian(model, kin, i, p);
    add_row(jac.row(2).transpose(), pen0, params.normal_stiffness, params.normal_damping);
    FrictionRow fr;
    fr.normal_row = static_cast<int>(rows.size()) - 1;
    fr.jac_t = jac.topRows(2);
    contact_link.push_back(i);
    contact_row.push_back(fr.normal_row);
    friction.push_back(std::move(fr));
  }

  solve_rows(solver, dt, params.coulomb_friction, params.tangential_regularization_velocity,
             rows, friction, v);

  EnvState next;
  for (std::size_t c = 0; c < contact_link.size(); ++c) {
    const auto& r = rows[contact_row[c]];
    if (r.force <= 0.0) continue;
    ContactPoint cp;
    cp.body_point = kin.links[contact_link[c]].tip;
    cp.penetration_depth = std::max(0.0, r.gap0 - dt * r.dir.dot(v));
    cp.normal_force = r.force;
    cp.tangential_force = friction[c].force;
    cp.body_id = contact_link[c];
    next.contacts.push_back(cp);
  }

  next.qdot = v;
  next.q = q + dt * v;
  next.time = state.time + dt;
  if (!next.q.allFinite() || !next.qdot.allFinite()) {
    throw SimulationDiverged(fmt::format("non-finite state at t = {:.4f} s", next.time));
  }
  return next;
}

double mechanical_energy(const RobotModel& model, const EnvState& state,
                         const ContactParams& params) {
  const Kinematics kin = forward_kinematics(model, state.q);
  double e = kinetic_energy(model, state.q, state.qdot) + gravity_potential(model, state.q);
  for (const auto& pose : kin.links) {
    const double pen = params.surface_height - pose.tip.z();
    if (pen > 0.0) e += 0.5 * params.normal_stiffness * pen * pen;
  }
  for (int i = model.first_actuated(); i < model.dof(); ++i) {
    const auto& l = model.links[i];
    const double over = std::max(state.q[i] - l.upper, 0.0) + std::max(l.lower - state.q[i], 0.0);
    e += 0.5 * model.limit_stiffness * over * over;
  }
  return e;
}

}  // namespace vic

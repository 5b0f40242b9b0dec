#pragma once

namespace vic {

/// Penalty contact against a horizontal surface at `surface_height`.
struct ContactParams {
  double surface_height = 0.0;                    // m
  double normal_stiffness = 1.0e4;                // N/m
  double normal_damping = 50.0;                   // N s/m
  double coulomb_friction = 1.0;                  // -
  double tangential_regularization_velocity = 0.01;  // m/s

  /// Damping from a ratio of the critical value for an effective mass:
  /// d = 2 * ratio * sqrt(k * m_eff).
  static double damping_for(double stiffness, double effective_mass, double ratio = 0.5);

  void validate() const;
};

struct ContactForce {
  double normal = 0.0;      // N, >= 0
  double tangential = 0.0;  // N, signed, opposes tangential velocity
};

/// Kelvin-Voigt normal force with regularized Coulomb friction.
///
/// `normal_velocity` is the point's velocity along the surface normal (positive away
/// from the surface). Friction is linear in velocity below the regularization velocity
/// and saturates at mu * normal above it.
ContactForce contact_force(double point_height, double normal_velocity,
                           double tangential_velocity, const ContactParams& params);

}  // namespace vic

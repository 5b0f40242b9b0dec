#include "vic/dynamics/contact.hpp"

#include <algorithm>
#include <cmath>

#include "vic/error.hpp"

namespace vic {

double ContactParams::damping_for(double stiffness, double effective_mass, double ratio) {
  return 2.0 * ratio * std::sqrt(stiffness * effective_mass);
}

void ContactParams::validate() const {
  if (!std::isfinite(surface_height)) throw ConfigError("surface_height", "must be finite");
  if (!(normal_stiffness > 0.0)) throw ConfigError("normal_stiffness", "must be > 0");
  if (!(normal_damping >= 0.0)) throw ConfigError("normal_damping", "must be >= 0");
  if (!(coulomb_friction >= 0.0)) throw ConfigError("coulomb_friction", "must be >= 0");
  if (!(tangential_regularization_velocity > 0.0)) {
    throw ConfigError("tangential_regularization_velocity", "must be > 0");
  }
}

ContactForce contact_force(double point_height, double normal_velocity,
                           double tangential_velocity, const ContactParams& params) {
  const double pen = params.surface_height - point_height;
  if (pen <= 0.0) return {};
  ContactForce f;
  f.normal = std::max(0.0, params.normal_stiffness * pen - params.normal_damping * normal_velocity);
  const double vr = params.tangential_regularization_velocity;
  const double slip = std::clamp(tangential_velocity / vr, -1.0, 1.0);
  f.tangential = -params.coulomb_friction * f.normal * slip;
  return f;
}

}  // namespace vic

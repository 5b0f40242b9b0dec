#include "vic/harness/experiment_spec.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vic/error.hpp"

namespace vic {
namespace {

template <class F>
void with_prefix(const std::string& prefix, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    const std::string& field = e.field();
    const std::string rest = std::string(e.what()).substr(field.size() + 2);
    throw ConfigError(prefix + "." + field, rest);
  }
}

}  // namespace

GainSchedule ControllerSpec::gains(int n_joints) const {
  GainSchedule g = GainSchedule::uniform(n_joints, kp, kd_ratio);
  g.kp_min = kp_min;
  g.kp_max = kp_max;
  return g;
}

ExperimentSpec ExperimentSpec::defaults_for(const std::string& env) {
  ExperimentSpec s;
  s.env = env;
  s.name = env;
  s.output_dir = "runs/" + env;
  if (env == "hopper") {
    s.controller.kd_ratio = 0.1;
    s.trainer.episodes = 600;
    s.trainer.updates_per_step = 0.25;
    s.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  } else if (env == "wiper") {
    s.trainer.episodes = 1200;
    s.trainer.updates_per_step = 0.25;
    s.seeds = {0, 1, 2, 3, 4, 5};
  } else if (env == "point_mass") {
    s.parametrization = Parametrization::kTorque;
    s.trainer.episodes = 300;
    s.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  } else {
    throw ConfigError("env", fmt::format("unknown environment '{}'", env));
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (env != "hopper" && env != "wiper" && env != "point_mass") {
    throw ConfigError("env", fmt::format("unknown environment '{}'", env));
  }
  if (name.empty()) throw ConfigError("name", "must not be empty");
  if (seeds.empty()) throw ConfigError("seeds", "need at least one seed");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
  if (!(convergence_fraction > 0.0 && convergence_fraction <= 1.0)) {
    throw ConfigError("convergence_fraction", "must be in (0, 1]");
  }
  if (final_window < 1) throw ConfigError("final_window", "must be >= 1");
  if (!(controller.kp_min > 0.0)) throw ConfigError("controller.kp_min", "must be > 0");
  if (controller.kp_min > controller.kp_max) {
    throw ConfigError("controller.kp_max",
                      fmt::format("lo > hi ({} > {})", controller.kp_min, controller.kp_max));
  }
  if (!(controller.kp >= controller.kp_min && controller.kp <= controller.kp_max)) {
    throw ConfigError("controller.kp", fmt::format("must be in [{}, {}]", controller.kp_min,
                                                   controller.kp_max));
  }
  if (!(controller.kd_ratio >= 0.0) || !std::isfinite(controller.kd_ratio)) {
    throw ConfigError("controller.kd_ratio", "must be >= 0");
  }
  if (!(tracking.k >= 0.0) || !std::isfinite(tracking.k)) {
    throw ConfigError("tracking.k", "must be >= 0");
  }
  trainer.validate();
  with_prefix("hopper", [&] {
    hopper.sim.validate();
    hopper.uncertainty.validate();
  });
  with_prefix("wiper", [&] {
    wiper.sim.validate();
    wiper.uncertainty.validate();
  });
  with_prefix("point_mass", [&] { point_mass.sim.validate(); });
}

std::unique_ptr<Environment> make_environment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.env == "hopper") {
    return std::make_unique<HopperEnv>(spec.hopper, spec.parametrization,
                                       spec.controller.gains(2), spec.tracking);
  }
  if (spec.env == "wiper") {
    return std::make_unique<WiperEnv>(spec.wiper, spec.parametrization,
                                      spec.controller.gains(3), spec.tracking);
  }
  return std::make_unique<PointMassEnv>(spec.point_mass, spec.parametrization,
                                        spec.controller.gains(1), spec.tracking);
}

}  // namespace vic

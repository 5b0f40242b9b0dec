#pragma once

#include <string>

#include "vic/dynamics/robot_model.hpp"
#include "vic/harness/experiment_spec.hpp"

namespace vic {

/// YAML text for a complete experiment spec. Keys always appear in the same order and
/// numbers use their shortest exact decimal form, so dump(parse(dump(s))) == dump(s).
std::string dump_experiment(const ExperimentSpec& spec);

/// Missing keys keep the per-environment defaults (ExperimentSpec::defaults_for).
/// Unknown keys, malformed values and out-of-range values throw ConfigError naming
/// the field, e.g. "trainer.gamma".
ExperimentSpec parse_experiment(const std::string& yaml);
/// Same, but keys missing from the file keep their values from `base`.
ExperimentSpec parse_experiment(const std::string& yaml, const ExperimentSpec& base);
ExperimentSpec load_experiment(const std::string& path);
ExperimentSpec load_experiment(const std::string& path, const ExperimentSpec& base);
void save_experiment(const ExperimentSpec& spec, const std::string& path);

/// Robot description files (key-value YAML, one entry per link).
std::string dump_robot(const RobotModel& model);
RobotModel parse_robot(const std::string& yaml);
RobotModel load_robot(const std::string& path);
void save_robot(const RobotModel& model, const std::string& path);

}  // namespace vic

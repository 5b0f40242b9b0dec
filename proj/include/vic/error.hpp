#pragma once

#include <stdexcept>
#include <string>

namespace vic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or out-of-guard configuration handed to the dynamics.
class InvalidState : public Error {
 public:
  explicit InvalidState(const std::string& what) : Error("invalid state: " + what) {}
};

/// The integrator produced NaN/Inf. Callers end the episode with a failure reward.
class SimulationDiverged : public Error {
 public:
  explicit SimulationDiverged(const std::string& what)
      : Error("simulation diverged: " + what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range configuration value. `field()` names the offender.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Checkpoint/trace file problems (bad magic, unknown version, truncated data, I/O).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A checkpoint was built for a different environment or parametrization.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace vic

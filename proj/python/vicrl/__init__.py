"""Python access to the vic simulation, control and learning library."""

from ._core import (
    ConfigError,
    Error,
    FormatError,
    MismatchError,
    Environment,
    Policy,
    default_config,
    evaluate,
    load_checkpoint,
    mass_matrix,
    mechanical_energy,
    robot_preset,
    run_experiment,
)

__all__ = [
    "ConfigError",
    "Error",
    "FormatError",
    "MismatchError",
    "Environment",
    "Policy",
    "default_config",
    "evaluate",
    "load_checkpoint",
    "mass_matrix",
    "mechanical_energy",
    "robot_preset",
    "run_experiment",
]

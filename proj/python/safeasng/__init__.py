"""Safe ASNG: Bernoulli natural-gradient search with a Walsh-surrogate safe region."""

from ._core import (
    ConfigError,
    InfeasibleSeedError,
    NoSafeCenterError,
    OracleUnavailableError,
    evaluate,
    fit_walsh,
    hamming_distance,
    known_optimum,
    project,
    run,
    run_experiment,
    summarize,
    verify,
)

__all__ = [
    "ConfigError",
    "InfeasibleSeedError",
    "NoSafeCenterError",
    "OracleUnavailableError",
    "evaluate",
    "fit_walsh",
    "hamming_distance",
    "known_optimum",
    "project",
    "run",
    "run_experiment",
    "summarize",
    "verify",
]

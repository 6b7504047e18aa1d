"""Python interface to the appmin optimizer."""

from ._appmin import (
    AppminError,
    AppParams,
    DEConfig,
    IterateRecord,
    Objective,
    RateFit,
    RunTrace,
    analysis,
    de_run,
    fit_rate,
    make_objective,
    objective_names,
    run,
    run_config,
    validate,
    weighted_mean,
)

__all__ = [
    "AppminError",
    "AppParams",
    "DEConfig",
    "IterateRecord",
    "Objective",
    "RateFit",
    "RunTrace",
    "analysis",
    "de_run",
    "fit_rate",
    "make_objective",
    "objective_names",
    "run",
    "run_config",
    "validate",
    "weighted_mean",
]

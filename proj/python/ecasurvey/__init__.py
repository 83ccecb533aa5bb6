"""Soil ECa survey toolkit: georeferencing, calibration, kriging and terrain simulation."""

from ._core import (
    EmptyResultError,
    Error,
    InfeasibleError,
    InputError,
    NumericalError,
    __version__,
    column_stats,
    empirical_variogram,
    fit_exponential,
    ordinary_kriging,
    regress,
    run_cli,
    simulate,
    sweep,
    utm_to_wgs84,
    wgs84_to_utm,
)

__all__ = [
    "EmptyResultError",
    "Error",
    "InfeasibleError",
    "InputError",
    "NumericalError",
    "__version__",
    "column_stats",
    "empirical_variogram",
    "fit_exponential",
    "ordinary_kriging",
    "regress",
    "run_cli",
    "simulate",
    "sweep",
    "utm_to_wgs84",
    "wgs84_to_utm",
]

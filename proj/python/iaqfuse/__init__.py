"""Sensor fusion, air-quality indices, and fractional system identification.

Thin package over the compiled extension; everything lives in ``_core``.
"""

from ._core import (
    DataError,
    NumericalError,
    UsageError,
    categorize,
    channels,
    eiaqi,
    evaluate,
    fuse,
    gl_weights,
    humidex,
    iaqi,
    identify,
    matern_poles,
    overall_iaqi,
    scenario_series,
    scenario_truth,
    simulate_ftf,
    weightage,
)

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "NumericalError",
    "UsageError",
    "categorize",
    "channels",
    "eiaqi",
    "evaluate",
    "fuse",
    "gl_weights",
    "humidex",
    "iaqi",
    "identify",
    "matern_poles",
    "overall_iaqi",
    "scenario_series",
    "scenario_truth",
    "simulate_ftf",
    "weightage",
]

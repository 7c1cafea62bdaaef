"""Experiment harness: sweeps, slope fits, CSV output and limit-set pictures."""

from .fit import SlopeFit, fit_slope
from .render import ImageSpec, fit_circline, render_limit_set
from .sweeps import SweepRecord, diagonal_sweep, divergence_sweep, sweep_theta, write_csv

__all__ = [
    "ImageSpec",
    "SlopeFit",
    "SweepRecord",
    "diagonal_sweep",
    "divergence_sweep",
    "fit_circline",
    "fit_slope",
    "render_limit_set",
    "sweep_theta",
    "write_csv",
]

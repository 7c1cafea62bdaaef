"""Log-log regression for convergence rates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientPoints, NonPositiveData

MIN_POINTS = 5


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float
    n_points: int


def fit_slope(xs, ys) -> SlopeFit:
    """Ordinary least squares of log y on log x."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"xs and ys must be 1-d of equal length, got {x.shape} and {y.shape}")
    if x.size < MIN_POINTS:
        raise InsufficientPoints(f"need at least {MIN_POINTS} points, got {x.size}")
    if not (np.all(x > 0) and np.all(y > 0)):
        raise NonPositiveData("log-log fit needs strictly positive data")
    lx, ly = np.log(x), np.log(y)
    design = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return SlopeFit(float(slope), float(intercept), float(min(1.0, max(0.0, r2))), int(x.size))

"""Sweeps of the bent family toward theta = 0 and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, fields
from pathlib import Path

import numpy as np

from .. import bendsolve
from ..bendsolve import BendingAngles
from ..errors import BendLabError, InconsistentInputs, SweepError
from ..minima import MinimumReport, Weights, kerckhoff_minimum
from .fit import SlopeFit, fit_slope

DEFAULT_GRID = tuple(np.geomspace(1e-3, 1e-1, 20))
DEFAULT_N_GRID = (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000)
PRODUCT_TOL = 1e-10
SIDE_TOL = 1e-9


@dataclass(frozen=True)
class SweepRecord:
    theta: float
    theta_alpha: float
    theta_beta: float
    l_alpha_star: float
    l_beta_star: float
    d: float
    l_beta_plus: float
    l_alpha_minus: float
    gap_alpha: float
    gap_beta: float
    dist_to_minimum: float  # nan when no minimum is attached
    x: float
    y: float
    re_z: float
    im_z: float

    def residuals(self) -> tuple[float, float]:
        """(quadrilateral-product residual, worst side-relation residual) from the stored values."""
        ch, sd = math.cosh(self.d), math.sinh(self.d)
        ha, hb = self.l_alpha_star / 2, self.l_beta_star / 2
        product = abs(ch * math.sinh(ha) * math.sinh(hb) - 1)
        side = max(
            abs(sd - math.tan(self.theta_alpha / 2) / math.tanh(hb)),
            abs(sd - math.tan(self.theta_beta / 2) / math.tanh(ha)),
            abs(ch * math.sinh(hb) - math.sinh(self.l_beta_plus / 2)),
            abs(ch * math.sinh(ha) - math.sinh(self.l_alpha_minus / 2)),
        )
        return product, side

    def check(self) -> None:
        product, side = self.residuals()
        if product > PRODUCT_TOL or side > SIDE_TOL:
            raise InconsistentInputs(f"record at theta={self.theta!r} fails its identities ({product:.3g}, {side:.3g})")


def make_record(theta: float, a: BendingAngles, minimum: MinimumReport | None = None) -> SweepRecord:
    g = bendsolve.lengths_from_angles(a)
    m = bendsolve.boundary_metrics(g, a)
    t = bendsolve.bent_triple(a)
    if minimum is None:
        dist = math.nan
    else:
        dist = abs(g.l_alpha_star - minimum.l_alpha) + abs(g.l_beta_star - minimum.l_beta)
    return SweepRecord(
        theta=theta,
        theta_alpha=a.theta_alpha,
        theta_beta=a.theta_beta,
        l_alpha_star=g.l_alpha_star,
        l_beta_star=g.l_beta_star,
        d=g.d,
        l_beta_plus=m.l_beta_plus,
        l_alpha_minus=m.l_alpha_minus,
        gap_alpha=m.gap_alpha,
        gap_beta=m.gap_beta,
        dist_to_minimum=dist,
        x=t.x.real,
        y=t.y.real,
        re_z=t.z.real,
        im_z=t.z.imag,
    )


def _guarded(theta: float, fn):
    try:
        return fn()
    except (BendLabError, ValueError) as exc:
        raise SweepError(f"at theta={theta!r}: {exc}", theta) from exc


def sweep_theta(w: Weights, theta_grid=DEFAULT_GRID) -> list[SweepRecord]:
    minimum = kerckhoff_minimum(w)
    out = []
    for theta in theta_grid:
        theta = float(theta)
        out.append(_guarded(theta, lambda: make_record(theta, BendingAngles(w.a * theta, w.b * theta), minimum)))
    return out


def diagonal_sweep(w: Weights, n_grid=DEFAULT_N_GRID, drift: bool = True) -> list[SweepRecord]:
    """Angles theta_n (a_n, b_n) with theta_n = 1/n^2 and weights drifting to (a, b).

    a_n = a(1 + 1/n), b_n = b(1 - 1/(2n)).  Distances are measured against the
    minimum for the limit weights.  With ``drift=False`` the weights are held
    fixed and the records coincide with ``sweep_theta`` on the grid 1/n^2.
    """
    minimum = kerckhoff_minimum(w)
    out = []
    for n in n_grid:
        n = int(n)
        if n < 1:
            raise ValueError(f"n must be a positive integer, got {n}")
        theta = 1.0 / n**2
        a_n = w.a * (1 + 1 / n) if drift else w.a
        b_n = w.b * (1 - 1 / (2 * n)) if drift else w.b
        out.append(_guarded(theta, lambda: make_record(theta, BendingAngles(a_n * theta, b_n * theta), minimum)))
    return out


@dataclass(frozen=True)
class DivergenceResult:
    records: list[SweepRecord]
    fit: SlopeFit
    cosh_d_minus_one: float  # at the smallest theta_alpha


def divergence_sweep(theta_grid=DEFAULT_GRID, k: float = 1.5) -> DivergenceResult:
    """theta_beta = theta_alpha**k; fits log sinh(l_beta*/2) against log theta_alpha."""
    if not k > 1:
        raise ValueError(f"exponent k must exceed 1, got {k}")
    records = []
    for theta in theta_grid:
        theta = float(theta)
        records.append(_guarded(theta, lambda: make_record(theta, BendingAngles(theta, theta**k))))
    xs = [r.theta_alpha for r in records]
    ys = [math.sinh(r.l_beta_star / 2) for r in records]
    fit = fit_slope(xs, ys)
    smallest = min(records, key=lambda r: r.theta_alpha)
    g = bendsolve.lengths_from_angles(BendingAngles(smallest.theta_alpha, smallest.theta_beta))
    return DivergenceResult(records, fit, g.cosh_d_minus_one)


COLUMNS = tuple(f.name for f in fields(SweepRecord))


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def records_to_csv(records) -> str:
    """CSV text with a header row; every record is re-checked before writing."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        r.check()
        writer.writerow(_fmt(v) for v in astuple(r))
    return buf.getvalue()


def write_csv(records, path) -> None:
    text = records_to_csv(records)
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_csv(path) -> list[SweepRecord]:
    with open(Path(path), encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise ValueError(f"{path} does not have the sweep header")
    return [SweepRecord(*(float(v) for v in row)) for row in rows[1:]]

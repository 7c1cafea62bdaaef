"""Minimum of a*l_alpha + b*l_beta over Fuchsian punctured-torus structures.

The objective depends only on the traces (x, y) and increases in each, so for
fixed x it is smallest at the least admissible y, which lies on the fold
locus x^2 y^2 = 4(x^2 + y^2).  There z = xy/2, the two axes are perpendicular
and the lengths satisfy sinh(l_alpha/2) sinh(l_beta/2) = 1.  The search is
therefore one-dimensional; we parametrize the fold by u = l_alpha, which keeps
the problem well scaled for long and short curves alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import bendsolve
from .bendsolve import BendingAngles, _asinh_diff
from .errors import NoBracket
from .ptorus import Branch, FuchsianPoint
from .quakebend import Curve, weighted_length_derivative

MAX_ITER = 200
# derivative step for the criticality report
CRIT_STEP = 1e-5


@dataclass(frozen=True)
class Weights:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"weights must be positive, got ({self.a}, {self.b})")

    def scaled_b(self, t: float) -> "Weights":
        return Weights(self.a, t * self.b)

    def swapped(self) -> "Weights":
        return Weights(self.b, self.a)


@dataclass(frozen=True)
class MinimumReport:
    point: FuchsianPoint
    l_alpha: float
    l_beta: float
    value: float
    criticality: float

    @property
    def is_critical(self) -> bool:
        return self.criticality <= 1e-5 * (1 + self.value)


def length_value(p: FuchsianPoint, w: Weights) -> float:
    la, lb = p.lengths()
    return w.a * la + w.b * lb


def fold_partner(u: float) -> float:
    """l_beta on the fold locus given l_alpha = u."""
    # 1/sinh(u/2) = 2 e^(-u/2) / (1 - e^(-u)), which cannot overflow
    return 2 * math.asinh(2 * math.exp(-u / 2) / -math.expm1(-u))


def fold_point(l_alpha: float) -> FuchsianPoint:
    l_beta = fold_partner(l_alpha)
    return FuchsianPoint(2 * math.cosh(l_alpha / 2), 2 * math.cosh(l_beta / 2), Branch.PLUS)


def _objective(w: Weights, u: float) -> float:
    return w.a * u + w.b * fold_partner(u)


def _objective_delta(w: Weights, u_ref: float, delta: float) -> float:
    """objective(u_ref + delta) - objective(u_ref) without cancellation.

    Near the minimum both terms are O(delta) and cancel to O(delta^2), so
    each is evaluated as an accurate difference.
    """
    u = u_ref + delta
    if u <= 0:
        return math.inf
    s, s_ref = math.sinh(u / 2), math.sinh(u_ref / 2)
    # 1/s - 1/s_ref = (s_ref - s)/(s s_ref), sinh p - sinh q = 2 cosh((p+q)/2) sinh((p-q)/2)
    ds = 2 * math.cosh((2 * u_ref + delta) / 4) * math.sinh(delta / 4)
    p, q = 1 / s, 1 / s_ref
    dp = -ds / (s * s_ref)
    if p >= q:
        dasinh = _asinh_diff(p, q, dp)
    else:
        dasinh = -_asinh_diff(q, p, -dp)
    return w.a * delta + 2 * w.b * dasinh


def _bracket(w: Weights, start: float) -> tuple[float, float]:
    f = lambda u: _objective(w, u)  # noqa: E731
    lo, hi = start / 2, start * 2
    for _ in range(MAX_ITER):
        mid = math.sqrt(lo * hi)
        f_lo, f_mid, f_hi = f(lo), f(mid), f(hi)
        if f_lo > f_mid and f_hi > f_mid:
            return lo, hi
        if f_lo <= f_mid:
            lo /= 4
        if f_hi <= f_mid:
            hi *= 4
        if lo < 1e-300 or hi > 1e300:
            break
    raise NoBracket(f"could not bracket the minimum for {w}")


def minimize_fold(w: Weights, start: float = 1.0) -> float:
    """l_alpha at the minimum, to about 1e-11 absolute."""
    lo, hi = _bracket(w, start)
    r1 = optimize.minimize_scalar(
        lambda u: _objective(w, u), bounds=(lo, hi), method="bounded", options={"maxiter": MAX_ITER, "xatol": 1e-12}
    )
    if not r1.success:
        raise NoBracket(f"coarse search failed for {w}: {r1.message}")
    u1 = float(r1.x)
    # the coarse stage is limited by the flatness of the objective; refine
    # the offset from u1 using accurately computed differences
    half = 1e-4 * max(1.0, u1)
    half = min(half, u1 / 2)
    for _ in range(8):
        r2 = optimize.minimize_scalar(
            lambda dl: _objective_delta(w, u1, dl),
            bounds=(-half, half),
            method="bounded",
            options={"maxiter": MAX_ITER, "xatol": 1e-14},
        )
        if not r2.success:
            raise NoBracket(f"refinement failed for {w}: {r2.message}")
        dl = float(r2.x)
        if abs(dl) < 0.9 * half:
            return u1 + dl
        u1 += dl
    raise NoBracket(f"refinement did not settle for {w}")


def closed_form_minimum(w: Weights) -> tuple[float, float]:
    """(l_alpha, l_beta) with sinh(l_alpha/2) = b/a and sinh(l_beta/2) = a/b."""
    return 2 * math.asinh(w.b / w.a), 2 * math.asinh(w.a / w.b)


def criticality(p: FuchsianPoint, w: Weights, h: float = CRIT_STEP) -> float:
    """Largest derivative of the objective along the two earthquake flows."""
    return max(abs(weighted_length_derivative(p, c, w.a, w.b, h)) for c in (Curve.ALPHA, Curve.BETA))


def kerckhoff_minimum(w: Weights, start: float | None = None) -> MinimumReport:
    if start is None:
        # any positive start works; this one is usually inside the bracket
        start = 2 * math.asinh(max(w.b / w.a, 1e-3))
    u = minimize_fold(w, start)
    p = fold_point(u)
    l_beta = fold_partner(u)
    return MinimumReport(p, u, l_beta, w.a * u + w.b * l_beta, criticality(p, w))


def line_of_minima(w: Weights, t_grid) -> list[MinimumReport]:
    out = []
    for t in t_grid:
        if not t > 0:
            raise ValueError(f"grid values must be positive, got {t}")
        out.append(kerckhoff_minimum(w.scaled_b(float(t))))
    return out


@dataclass(frozen=True)
class LimitResidual:
    residual: float
    d: float
    l_alpha_star: float
    l_beta_star: float
    l_alpha_min: float
    l_beta_min: float


def limit_matches_minimum(w: Weights, theta: float, minimum: MinimumReport | None = None) -> LimitResidual:
    """Distance of the core lengths at angles (a theta, b theta) from the minimum."""
    g = bendsolve.lengths_from_angles(BendingAngles(w.a * theta, w.b * theta))
    m = minimum if minimum is not None else kerckhoff_minimum(w)
    res = abs(g.l_alpha_star - m.l_alpha) + abs(g.l_beta_star - m.l_beta)
    return LimitResidual(res, g.d, g.l_alpha_star, g.l_beta_star, m.l_alpha, m.l_beta)


def _feasible(la, lb):
    x = 2 * np.cosh(la / 2)
    y = 2 * np.cosh(lb / 2)
    return (x * y) ** 2 >= 4 * (x * x + y * y)


def _least_feasible_lb(la: np.ndarray, hi: float) -> np.ndarray:
    """Smallest l_beta with (l_alpha, l_beta) feasible, by bisection per column."""
    lo = np.zeros_like(la)
    up = np.full_like(la, hi)
    for _ in range(80):
        mid = (lo + up) / 2
        ok = _feasible(la, mid)
        up = np.where(ok, mid, up)
        lo = np.where(ok, lo, mid)
    return up


def grid_search(w: Weights, n: int = 801, span: float = 5.0, rounds: int = 30) -> tuple[float, float]:
    """Brute-force (l_alpha, l_beta) minimizer over feasible (x, y).

    A dense grid over the Fuchsian region {x, y > 2, x^2 y^2 >= 4(x^2 + y^2)},
    logarithmic in the lengths, locates the basin.  The window in l_alpha is
    then halved repeatedly; in each column the objective is smallest at the
    least feasible l_beta, found by bisection on the feasibility test.  No
    closed form for the constraint boundary is used.
    """
    g = np.exp(np.linspace(-span, span, n))
    LA, LB = np.meshgrid(g, g, indexing="ij")
    with np.errstate(over="ignore"):
        val = np.where(_feasible(LA, LB), w.a * LA + w.b * LB, np.inf)
    i, _ = np.unravel_index(np.argmin(val), val.shape)
    c, half = math.log(g[i]), 4 * (2 * span / (n - 1))
    hi = float(g[-1])
    for _ in range(rounds):
        la = np.exp(np.linspace(c - half, c + half, 201))
        lb = _least_feasible_lb(la, hi)
        k = int(np.argmin(w.a * la + w.b * lb))
        c = math.log(la[k])
        half /= 2
    la = math.exp(c)
    return la, float(_least_feasible_lb(np.array([la]), hi)[0])

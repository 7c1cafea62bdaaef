"""Marked once-punctured-torus groups.

A marked group is a generator pair (A, B) whose commutator is parabolic with
trace -2.  Up to conjugacy it is determined by the trace triple
(x, y, z) = (Tr A, Tr B, Tr AB), which satisfies the Markov relation
x^2 + y^2 + z^2 = xyz.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from . import h3geom
from .errors import (
    InconsistentTriple,
    InfeasiblePoint,
    NonLoxodromicA,
    ParabolicGenerator,
    ParabolicOrIdentity,
)
from .h3geom import MoebiusMap

MARKOV_TOL = 1e-10
COMMUTATOR_TOL = 1e-9
REAL_TOL = 1e-10
# relative slack for the real-root condition x^2 y^2 >= 4(x^2 + y^2)
FOLD_TOL = 1e-10


class Branch(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


def markov_residual(x: complex, y: complex, z: complex) -> float:
    return abs(x * x + y * y + z * z - x * y * z)


def markov_roots(x: complex, y: complex) -> tuple[complex, complex]:
    """Both roots z of z^2 - xyz + x^2 + y^2 = 0, larger-magnitude root first."""
    x, y = complex(x), complex(y)
    p = x * y
    s = x * x + y * y
    sq = cmath.sqrt(p * p - 4 * s)
    q = (p + sq) / 2 if abs(p + sq) >= abs(p - sq) else (p - sq) / 2
    if q == 0:
        return 0j, 0j
    return q, s / q


def _tie(u: float, v: float, scale: float) -> bool:
    return abs(u - v) <= 1e-12 * max(1.0, scale)


def markov_z(x: complex, y: complex, branch: Branch | str = Branch.PLUS) -> complex:
    """Markov root for Tr AB.

    ``plus`` picks the root with larger real part (ties: larger imaginary
    part); ``minus`` the other one.
    """
    branch = Branch(branch)
    r1, r2 = markov_roots(x, y)
    scale = max(abs(r1), abs(r2))
    if _tie(r1.real, r2.real, scale):
        first_is_plus = r1.imag >= r2.imag
    else:
        first_is_plus = r1.real > r2.real
    plus, minus = (r1, r2) if first_is_plus else (r2, r1)
    return plus if branch is Branch.PLUS else minus


def upper_root(x: complex, y: complex) -> complex:
    """The Markov root with nonnegative imaginary part (larger one on ties)."""
    r1, r2 = markov_roots(x, y)
    if _tie(r1.imag, r2.imag, max(abs(r1), abs(r2))):
        return r1 if r1.real >= r2.real else r2
    return r1 if r1.imag > r2.imag else r2


@dataclass(frozen=True)
class TraceTriple:
    x: complex
    y: complex
    z: complex

    def __post_init__(self):
        for name in ("x", "y", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def residual(self) -> float:
        return markov_residual(self.x, self.y, self.z)

    def is_consistent(self, tol: float = MARKOV_TOL) -> bool:
        scale = max(1.0, abs(self.x * self.y * self.z))
        return self.residual <= tol * scale

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.x, self.y, self.z)

    @classmethod
    def from_xy(cls, x: complex, y: complex, branch: Branch | str = Branch.PLUS) -> "TraceTriple":
        return cls(x, y, markov_z(x, y, branch))


@dataclass(frozen=True)
class MarkedGroup:
    A: MoebiusMap
    B: MoebiusMap

    @property
    def AB(self) -> MoebiusMap:
        return self.A @ self.B

    def traces(self) -> TraceTriple:
        """Traces of A, B, AB exactly as stored (no sign normalization)."""
        return TraceTriple(self.A.trace, self.B.trace, (self.A @ self.B).trace)

    def normalized_traces(self) -> TraceTriple:
        return TraceTriple(*(h3geom.normalize_trace(t) for t in self.traces().as_tuple()))

    def commutator_trace(self) -> complex:
        return h3geom.commutator(self.A, self.B).trace

    def axes(self) -> tuple[h3geom.GeodesicLine, h3geom.GeodesicLine]:
        return h3geom.axis(self.A), h3geom.axis(self.B)

    def axis_distance(self) -> h3geom.ComplexDistance:
        return h3geom.complex_distance(*self.axes())

    def check(self) -> None:
        """Raise if the puncture is not parabolic or A is not loxodromic."""
        if abs(self.commutator_trace() + 2) > COMMUTATOR_TOL:
            raise InconsistentTriple(f"commutator trace {self.commutator_trace()!r} != -2")
        h3geom.axis(self.A)


def group_from_triple(t: TraceTriple, half_length: complex | None = None) -> MarkedGroup:
    """Generator matrices with traces (x, y, z).

    A = diag(lam, 1/lam) with |lam| > 1, so its axis is (0 -> oo).  B is
    chosen with off-diagonal entries b = -c, which puts its fixed points at
    {v, 1/v}; the half-turn w -> 1/w then swaps both axes, so their common
    perpendicular runs through the point (0, 1).

    ``half_length`` (with x = 2 cosh(half_length)) may be passed when it is
    known exactly; recovering it from x loses digits when A is nearly parabolic.
    """
    x, y, z = t.as_tuple()
    if not t.is_consistent():
        raise InconsistentTriple(f"Markov residual {t.residual:.3g} too large for {t}")
    if abs(x * x - 4) <= 1e-12:
        raise NonLoxodromicA(f"Tr A = {x!r} is parabolic")
    if half_length is not None:
        lam = cmath.exp(half_length)
    else:
        lam = (x + cmath.sqrt(x * x - 4)) / 2
    if abs(lam) < 1:
        lam = 1 / lam
    if abs(abs(lam) - 1) <= 1e-12:
        raise NonLoxodromicA(f"Tr A = {x!r} is elliptic")
    s = lam - 1 / lam
    a = (z - y / lam) / s
    d = y - a
    # det B = 1 needs c^2 = 1 - ad.  The Markov relation turns ad into
    # x^2/(x^2 - 4), so c = 2i/s exactly; that form avoids the cancellation in
    # 1 - ad when B is nearly parabolic.  When A is nearly parabolic ad is
    # large and c has to match the computed a, d instead.  The sign always
    # follows 2i/s so the branch cut of sqrt cannot flip the orientation.
    c = 2j / s
    if abs(a * d) > 4:
        c_det = cmath.sqrt(1 - a * d)
        c = c_det if abs(c_det - c) <= abs(c_det + c) else -c_det
    return MarkedGroup(MoebiusMap.diagonal(lam), MoebiusMap(a, -c, c, d))


@dataclass(frozen=True)
class FuchsianPoint:
    """Real traces x, y > 2 plus a choice of Markov root for z."""

    x: float
    y: float
    branch: Branch = Branch.PLUS

    def __post_init__(self):
        object.__setattr__(self, "branch", Branch(self.branch))
        if not (self.x > 2 and self.y > 2):
            raise InfeasiblePoint(f"need x, y > 2, got ({self.x}, {self.y})")
        if self.discriminant < -FOLD_TOL * (self.x * self.y) ** 2:
            raise InfeasiblePoint(f"({self.x}, {self.y}) is below the fold locus")

    @property
    def discriminant(self) -> float:
        return (self.x * self.y) ** 2 - 4 * (self.x**2 + self.y**2)

    @property
    def z(self) -> float:
        sq = math.sqrt(max(self.discriminant, 0.0))
        p = self.x * self.y
        big = (p + sq) / 2
        small = (self.x**2 + self.y**2) / big
        return big if self.branch is Branch.PLUS else small

    def triple(self) -> TraceTriple:
        return TraceTriple(self.x, self.y, self.z)

    def group(self) -> MarkedGroup:
        return group_from_triple(self.triple())

    @classmethod
    def from_triple(cls, t: TraceTriple, tol: float = REAL_TOL) -> "FuchsianPoint":
        """Read back a real triple, choosing the branch nearest to its z."""
        if max(abs(t.x.imag), abs(t.y.imag), abs(t.z.imag)) > tol * max(1.0, abs(t.z)):
            raise InfeasiblePoint(f"triple {t} is not real")
        x, y, z = abs(t.x.real), abs(t.y.real), abs(t.z.real)
        plus = cls(x, y, Branch.PLUS)
        minus = cls(x, y, Branch.MINUS)
        return plus if abs(plus.z - z) <= abs(minus.z - z) else minus

    def lengths(self) -> tuple[float, float]:
        return 2 * math.acosh(self.x / 2), 2 * math.acosh(self.y / 2)


def is_fuchsian_triple(t: TraceTriple) -> bool:
    if not all(abs(v.imag) <= REAL_TOL for v in t.as_tuple()):
        return False
    return all(v.real > 2 for v in t.as_tuple())


def lengths_of(t: TraceTriple) -> tuple[complex, complex]:
    try:
        return h3geom.length_from_trace(t.x), h3geom.length_from_trace(t.y)
    except ParabolicOrIdentity as exc:
        raise ParabolicGenerator(str(exc)) from None

"""Earthquakes and quakebends of marked punctured-torus groups.

A quakebend along alpha with complex parameter tau keeps A and replaces B by
C_tau B, where C_tau moves along the axis of A by the complex distance tau:
Re tau shears, Im tau bends.  Along beta the roles swap and the parameter
enters with the opposite sign, because the marking (B, A) has the opposite
orientation from (A, B).  With that choice the alpha- and beta-earthquakes
satisfy the antisymmetry of length derivatives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from . import bendsolve, h3geom, ptorus
from .bendsolve import BendingAngles
from .errors import NonLoxodromic, ParabolicOrIdentity, SignConventionFailure, StepTooSmall
from .h3geom import MoebiusMap
from .ptorus import FuchsianPoint, MarkedGroup, TraceTriple

DEFAULT_STEP = 1e-5
# below this step the O(eps/h) roundoff of a central difference exceeds 1e-8
MIN_STEP = 1e-8
REAL_TRACE_TOL = 1e-9


class Curve(str, Enum):
    ALPHA = "alpha"
    BETA = "beta"


@dataclass(frozen=True)
class QuakebendParam:
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if not abs(self.tau.imag) < math.pi:
            raise ValueError(f"bend angle {self.tau.imag} must be in (-pi, pi)")


def _tau(tau) -> complex:
    return tau.tau if isinstance(tau, QuakebendParam) else complex(tau)


def twist_element(A: MoebiusMap, tau) -> MoebiusMap:
    """exp(tau/2 N) where A = exp(lam/2 N), N^2 = I, Re lam > 0.

    It shares the axis and orientation of A and has complex length tau.
    """
    tau = _tau(tau)
    tr = A.trace
    try:
        lam = h3geom.length_from_trace(tr)
    except ParabolicOrIdentity as exc:
        raise NonLoxodromic(str(exc)) from None
    if lam.real <= h3geom.ELLIPTIC_TOL:
        raise NonLoxodromic(f"A is elliptic (trace {tr!r})")
    # N = (A - ch I)/sh is traceless; writing its diagonal as (a - d)/2 avoids
    # subtracting the trace.  sh^2 = ((a - d)/2)^2 + bc, and the sign of sh is
    # the one with Re acosh(ch) >= 0, which fixes the orientation of N.
    ch = tr / 2
    half_diff = (A.a - A.d) / 2
    sh = cmath.sqrt(half_diff**2 + A.b * A.c)
    ref = cmath.sinh(cmath.acosh(ch))
    if abs(sh - ref) > abs(sh + ref):
        sh = -sh
    ct, st = cmath.cosh(tau / 2), cmath.sinh(tau / 2)
    k = st / sh
    return MoebiusMap(ct + k * half_diff, k * A.b, k * A.c, ct - k * half_diff)


def quakebend_alpha(G: MarkedGroup, tau) -> MarkedGroup:
    return MarkedGroup(G.A, twist_element(G.A, tau) @ G.B)


def quakebend_beta(G: MarkedGroup, tau) -> MarkedGroup:
    return MarkedGroup(twist_element(G.B, -_tau(tau)) @ G.A, G.B)


def quakebend(G: MarkedGroup, curve: Curve | str, tau) -> MarkedGroup:
    if Curve(curve) is Curve.ALPHA:
        return quakebend_alpha(G, tau)
    return quakebend_beta(G, tau)


def _max_imag(t: TraceTriple) -> float:
    return max(abs(v.imag) for v in t.as_tuple())


@dataclass(frozen=True)
class UnbendResult:
    curve: Curve
    tau: complex
    triple: TraceTriple  # sign-normalized real traces
    l_alpha: float
    l_beta: float


def unbend_check(a: BendingAngles, curve: Curve | str = Curve.ALPHA) -> UnbendResult:
    """Undo the bending of one side with a pure bend.

    Along alpha the result is the flat structure of the plus side, so its
    beta-length is l_beta+; along beta it is the minus side with alpha-length
    l_alpha-.  The sign of the bend is whichever one makes every trace real.
    """
    curve = Curve(curve)
    G = bendsolve.group_from_bending(a, beta_diagonal=curve is Curve.BETA)
    theta = a.theta_alpha if curve is Curve.ALPHA else a.theta_beta
    best = None
    for sign in (-1, 1):
        tau = complex(0, sign * theta)
        H = quakebend(G, curve, tau)
        t = H.normalized_traces()
        err = _max_imag(t)
        if err <= REAL_TRACE_TOL * max(1.0, abs(t.z)):
            best = (tau, t)
            break
    if best is None:
        raise SignConventionFailure(f"no pure bend along {curve.value} makes {a} real")
    tau, t = best
    real = TraceTriple(t.x.real, t.y.real, t.z.real)
    l_alpha, l_beta = (v.real for v in ptorus.lengths_of(real))
    return UnbendResult(curve, tau, real, l_alpha, l_beta)


def earthquake(p: FuchsianPoint, curve: Curve | str, t: float) -> FuchsianPoint:
    if t == 0:
        return p
    H = quakebend(p.group(), curve, complex(t))
    return FuchsianPoint.from_triple(H.normalized_traces())


@dataclass(frozen=True)
class EarthquakePath:
    """The earthquake along one curve through a base point, evaluated at time t."""

    base: FuchsianPoint
    curve: Curve
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "curve", Curve(self.curve))

    def point(self) -> FuchsianPoint:
        return earthquake(self.base, self.curve, self.t)

    def at(self, t: float) -> "EarthquakePath":
        return EarthquakePath(self.base, self.curve, t)


def _length(p: FuchsianPoint, curve: Curve) -> float:
    la, lb = p.lengths()
    return la if curve is Curve.ALPHA else lb


def length_derivative(
    p: FuchsianPoint,
    along: Curve | str,
    of: Curve | str,
    h: float = DEFAULT_STEP,
    richardson: bool = False,
) -> float:
    """Central difference of l_of along the earthquake flow of ``along``."""
    along, of = Curve(along), Curve(of)
    if not h >= MIN_STEP:
        raise StepTooSmall(f"step {h!r} is below {MIN_STEP:g}; roundoff would dominate")

    def central(step: float) -> float:
        up = _length(earthquake(p, along, step), of)
        down = _length(earthquake(p, along, -step), of)
        return (up - down) / (2 * step)

    d1 = central(h)
    if not richardson:
        return d1
    return (4 * central(h / 2) - d1) / 3


def weighted_length_derivative(
    p: FuchsianPoint, along: Curve | str, a: float, b: float, h: float = DEFAULT_STEP
) -> float:
    """Derivative of a*l_alpha + b*l_beta along an earthquake."""
    return a * length_derivative(p, along, Curve.ALPHA, h) + b * length_derivative(p, along, Curve.BETA, h)


def second_difference(p: FuchsianPoint, along: Curve | str, of: Curve | str, h: float = 1e-2) -> float:
    along, of = Curve(along), Curve(of)
    up = _length(earthquake(p, along, h), of)
    mid = _length(p, of)
    down = _length(earthquake(p, along, -h), of)
    return (up - 2 * mid + down) / (h * h)


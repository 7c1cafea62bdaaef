"""Exact bending formulas for the two-curve punctured-torus family.

The convex-hull boundary facing one side is bent along alpha with exterior
angle theta_alpha, the other side along beta with angle theta_beta.  The
relations between the angles, the core lengths l_alpha*, l_beta*, the
distance d between the axes, and the boundary lengths are closed form:

    cos(theta_a/2) = cosh(l_b*/2) tanh(l_a*/2)          (and a <-> b)
    sinh(l_a*/2)   = sin(theta_b/2) cot(theta_a/2)       (and a <-> b)
    cosh d sinh(l_a*/2) sinh(l_b*/2) = 1
    sinh d = coth(l_b*/2) tan(theta_a/2)
    cosh d sinh(l_b*/2) = sinh(l_b+/2)                   (and a <-> b, minus side)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import ptorus
from .errors import InconsistentInputs, InfeasibleAngles, InfeasibleLengths
from .ptorus import MarkedGroup, TraceTriple

CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class BendingAngles:
    theta_alpha: float
    theta_beta: float

    def __post_init__(self):
        for name in ("theta_alpha", "theta_beta"):
            v = getattr(self, name)
            if not (0 < v < math.pi):
                raise InfeasibleAngles(f"{name} = {v!r} is outside (0, pi)")

    def swapped(self) -> "BendingAngles":
        return BendingAngles(self.theta_beta, self.theta_alpha)


@dataclass(frozen=True)
class CoreGeometry:
    l_alpha_star: float
    l_beta_star: float
    d: float
    # 1 - 1/cosh d, kept separately because it is O(theta^2) and cancels badly
    one_minus_sech_d: float = 0.0

    def product_residual(self) -> float:
        return abs(
            math.cosh(self.d) * math.sinh(self.l_alpha_star / 2) * math.sinh(self.l_beta_star / 2) - 1
        )

    @property
    def tanh_d(self) -> float:
        # tanh d = sqrt(1 - sech^2 d)
        if self.one_minus_sech_d:
            u = self.one_minus_sech_d
            return math.sqrt(u * (2 - u))
        return math.tanh(self.d)

    @property
    def cosh_d_minus_one(self) -> float:
        # cosh d - 1 = (1 - sech d) cosh d
        if self.one_minus_sech_d:
            return self.one_minus_sech_d * math.cosh(self.d)
        return 2 * math.sinh(self.d / 2) ** 2


@dataclass(frozen=True)
class BoundaryMetrics:
    l_alpha_plus: float
    l_beta_plus: float
    l_alpha_minus: float
    l_beta_minus: float
    gap_alpha: float
    gap_beta: float


def _one_minus_cos(x: float) -> float:
    return 2 * math.sin(x / 2) ** 2


def lengths_from_angles(a: BendingAngles) -> CoreGeometry:
    ha, hb = a.theta_alpha / 2, a.theta_beta / 2
    sa = math.sin(hb) / math.tan(ha)
    sb = math.sin(ha) / math.tan(hb)
    if not (sa > 0 and sb > 0):
        raise InfeasibleAngles(f"nonpositive sinh argument for {a}")
    # sinh(l_a/2) sinh(l_b/2) = cos(ha) cos(hb) =: c, and cosh d = 1/c.
    # 1 - c = (1 - cos ha) + cos ha (1 - cos hb) avoids cancellation.
    c = math.cos(ha) * math.cos(hb)
    one_minus_c = _one_minus_cos(ha) + math.cos(ha) * _one_minus_cos(hb)
    if c <= 0 or 1 / c < 1 - 1e-9:
        raise InfeasibleAngles(f"cosh d argument out of range for {a}")
    # sinh d = sqrt(1 - c^2) / c; 1 - c is accurate down to underflow, so even
    # tiny angles keep full relative precision in d
    d = math.asinh(math.sqrt(one_minus_c * (1 + c)) / c)
    return CoreGeometry(2 * math.asinh(sa), 2 * math.asinh(sb), d, one_minus_c)


def angles_from_lengths(l_alpha_star: float, l_beta_star: float) -> BendingAngles:
    pa = math.cosh(l_beta_star / 2) * math.tanh(l_alpha_star / 2)
    pb = math.cosh(l_alpha_star / 2) * math.tanh(l_beta_star / 2)
    for p in (pa, pb):
        if p >= 1:
            raise InfeasibleLengths(f"cosh*tanh product {p!r} >= 1 (Fuchsian side)", witness=p)
        if p <= 0:
            raise InfeasibleLengths(f"cosh*tanh product {p!r} <= 0", witness=p)
    return BendingAngles(2 * math.acos(pa), 2 * math.acos(pb))


def _asinh_diff(big: float, small: float, diff: float) -> float:
    """asinh(big) - asinh(small) given diff = big - small computed accurately."""
    den = big * math.sqrt(1 + small * small) + small * math.sqrt(1 + big * big)
    return math.asinh(diff * (big + small) / den)


def boundary_metrics(g: CoreGeometry, a: BendingAngles) -> BoundaryMetrics:
    ref = lengths_from_angles(a)
    res = max(
        abs(ref.l_alpha_star - g.l_alpha_star), abs(ref.l_beta_star - g.l_beta_star), abs(ref.d - g.d)
    )
    if res > CONSISTENCY_TOL:
        raise InconsistentInputs(f"geometry {g} does not match angles {a} (residual {res:.3g})")
    ch = math.cosh(g.d)
    eps = g.cosh_d_minus_one
    sa, sb = math.sinh(g.l_alpha_star / 2), math.sinh(g.l_beta_star / 2)
    # the plus side is bent along alpha, so alpha is geodesic there; beta
    # crosses the bending line and gets longer.  Symmetrically on the minus side.
    l_beta_plus = 2 * math.asinh(ch * sb)
    l_alpha_minus = 2 * math.asinh(ch * sa)
    gap_beta = 2 * _asinh_diff(ch * sb, sb, eps * sb)
    gap_alpha = 2 * _asinh_diff(ch * sa, sa, eps * sa)
    return BoundaryMetrics(
        l_alpha_plus=g.l_alpha_star,
        l_beta_plus=l_beta_plus,
        l_alpha_minus=l_alpha_minus,
        l_beta_minus=g.l_beta_star,
        gap_alpha=gap_alpha,
        gap_beta=gap_beta,
    )


def side_residuals(g: CoreGeometry, a: BendingAngles, m: BoundaryMetrics) -> tuple[float, ...]:
    """Residuals of both quadrilateral relations, on each side."""
    sd = math.sinh(g.d)
    ch = math.cosh(g.d)
    la, lb = g.l_alpha_star / 2, g.l_beta_star / 2
    return (
        abs(sd - math.tan(a.theta_alpha / 2) / math.tanh(lb)),
        abs(ch * math.sinh(lb) - math.sinh(m.l_beta_plus / 2)),
        abs(sd - math.tan(a.theta_beta / 2) / math.tanh(la)),
        abs(ch * math.sinh(la) - math.sinh(m.l_alpha_minus / 2)),
    )


def bent_triple(a: BendingAngles) -> TraceTriple:
    """Real traces of A, B from the core lengths; Tr AB is the Markov root with Im >= 0.

    With these x, y the Markov discriminant is -16 tanh^2 d, so the root is
    xy/2 + 2i tanh d.  Evaluating it that way avoids the cancellation in
    x^2 y^2 - 4(x^2 + y^2) when the traces are large.
    """
    g = lengths_from_angles(a)
    x = 2 * math.cosh(g.l_alpha_star / 2)
    y = 2 * math.cosh(g.l_beta_star / 2)
    return TraceTriple(x, y, complex(x * y / 2, 2 * g.tanh_d))


def group_from_bending(a: BendingAngles, beta_diagonal: bool = False) -> MarkedGroup:
    """The bent group, normalized as in ``ptorus.group_from_triple``.

    The upper Markov root is the one whose axes have twist +pi/2; the other
    root gives the mirror-image group.  With ``beta_diagonal`` the conjugate
    with B diagonal is returned instead, which keeps full precision for
    deformations along beta when B is nearly parabolic.
    """
    g = lengths_from_angles(a)
    t = bent_triple(a)
    if not beta_diagonal:
        return ptorus.group_from_triple(t, half_length=g.l_alpha_star / 2)
    swapped = ptorus.group_from_triple(TraceTriple(t.y, t.x, t.z), half_length=g.l_beta_star / 2)
    return MarkedGroup(swapped.B, swapped.A)


def divergence_profile(theta_alpha: float, k: float) -> CoreGeometry:
    """Core geometry along theta_beta = theta_alpha ** k."""
    if not k >= 1:
        raise ValueError(f"exponent k must be >= 1, got {k}")
    return lengths_from_angles(BendingAngles(theta_alpha, theta_alpha**k))

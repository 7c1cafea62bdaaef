"""Möbius maps and hyperbolic geometry in the upper half-space model.

Boundary points live on the Riemann sphere: finite points are Python
complex numbers and the point at infinity is ``INF``.  Interior points are
``H3Point(z, t)`` with horizontal coordinate ``z`` and height ``t > 0``.

Metric computations on interior points (angles, segments, point-to-line
distances) go through the hyperboloid model in R^{3,1}, where geodesics are
linear and cancellation is easy to control.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    Degenerate,
    DegenerateSegment,
    Elliptic,
    ParabolicOrIdentity,
    SharedEndpoint,
)

INF = complex(math.inf, 0.0)
_EPS = 2.0**-52

# |Tr M| within this distance of 2 counts as parabolic or the identity.
PARABOLIC_TOL = 1e-10
# Translation lengths below this count as elliptic.
ELLIPTIC_TOL = 1e-10
# Boundary points closer than this (after normalizing a line to {0, oo}) are equal.
ENDPOINT_TOL = 1e-13


def is_inf(w: complex) -> bool:
    return cmath.isinf(w)


def normalize_trace(tr: complex) -> complex:
    """Pick the sign of a PSL(2,C) trace: real part >= 0, else imaginary part >= 0."""
    if tr.real < 0 or (tr.real == 0 and tr.imag < 0):
        return -tr
    return tr


def length_from_trace(tr: complex) -> complex:
    """Complex length lam with 2 cosh(lam/2) = tr.

    Branch: Re lam >= 0 and Im lam in (-pi, pi].  Raises for traces +-2.
    """
    tr = normalize_trace(complex(tr))
    if abs(tr - 2) <= PARABOLIC_TOL:
        raise ParabolicOrIdentity(f"trace {tr!r} is +-2")
    lam = 2 * cmath.acosh(tr / 2)
    if lam.real < 0:
        lam = -lam
    if lam.imag <= -math.pi:
        lam += 2j * math.pi
    return lam


# ---------------------------------------------------------------------------
# Möbius maps


@dataclass(frozen=True)
class MoebiusMap:
    """Element of SL(2,C), read projectively (M and -M act identically)."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_entries(cls, a, b, c, d) -> "MoebiusMap":
        """Build a map from any invertible matrix, scaling it to determinant one."""
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if det == 0:
            raise Degenerate("singular matrix")
        s = cmath.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def diagonal(cls, lam: complex) -> "MoebiusMap":
        """diag(lam, 1/lam)."""
        lam = complex(lam)
        return cls(lam, 0j, 0j, 1 / lam)

    @classmethod
    def translation(cls, u: complex) -> "MoebiusMap":
        return cls(1 + 0j, complex(u), 0j, 1 + 0j)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def normalized_trace(self) -> complex:
        return normalize_trace(self.trace)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "MoebiusMap":
        return MoebiusMap(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __call__(self, w: complex) -> complex:
        """Action on the Riemann sphere."""
        if is_inf(w):
            return INF if self.c == 0 else self.a / self.c
        num = self.a * w + self.b
        den = self.c * w + self.d
        if den == 0:
            return INF
        return num / den

    def act(self, p: "H3Point") -> "H3Point":
        """Poincaré extension to upper half-space."""
        z, t = p.z, p.t
        cz_d = self.c * z + self.d
        den = abs(cz_d) ** 2 + abs(self.c) ** 2 * t * t
        zn = ((self.a * z + self.b) * cz_d.conjugate() + self.a * self.c.conjugate() * t * t) / den
        return H3Point(zn, t / den)

    def allclose(self, other: "MoebiusMap", tol: float = 1e-10) -> bool:
        """Equality in PSL(2,C): entries agree up to a global sign."""
        m, n = self.as_array(), other.as_array()
        return bool(np.max(np.abs(m - n)) <= tol or np.max(np.abs(m + n)) <= tol)


def compose(M: MoebiusMap, N: MoebiusMap) -> MoebiusMap:
    """Matrix product M N, renormalized to determinant one."""
    a = M.a * N.a + M.b * N.c
    b = M.a * N.b + M.b * N.d
    c = M.c * N.a + M.d * N.c
    d = M.c * N.b + M.d * N.d
    return _renormalized(a, b, c, d)


def _renormalized(a: complex, b: complex, c: complex, d: complex) -> MoebiusMap:
    # Only rescale when det - 1 exceeds what rounding in ad - bc can explain.
    # For ill-conditioned matrices (|ad| >> 1) that rounding noise is far
    # larger than the real drift, and dividing by its square root would
    # perturb every entry by the noise.
    ad, bc = a * d, b * c
    det = ad - bc
    if abs(det - 1) <= 64 * _EPS * (abs(ad) + abs(bc)):
        return MoebiusMap(a, b, c, d)
    s = cmath.sqrt(det)
    return MoebiusMap(a / s, b / s, c / s, d / s)


def inverse(M: MoebiusMap) -> MoebiusMap:
    return M.inverse()


def commutator(A: MoebiusMap, B: MoebiusMap) -> MoebiusMap:
    return A @ B @ A.inverse() @ B.inverse()


def complex_length(M: MoebiusMap) -> complex:
    return length_from_trace(M.trace)


def fixed_points(M: MoebiusMap) -> tuple[complex, complex]:
    """Both fixed points of a non-parabolic map, repelling first when that makes sense.

    Roots of c w^2 + (d - a) w - b = 0, computed without cancellation.
    """
    a, b, c, d = M.a, M.b, M.c, M.d
    h = d - a
    # (d - a)^2 + 4bc equals tr^2 - 4 but does not cancel for near-parabolic maps
    sq = cmath.sqrt(h * h + 4 * b * c)
    q1 = -(h + sq) / 2
    q2 = -(h - sq) / 2
    q = q1 if abs(q1) >= abs(q2) else q2
    if q == 0:
        raise ParabolicOrIdentity("map has a single fixed point")
    w_far = INF if c == 0 else q / c
    w_near = -b / q
    # multiplier at a fixed point w is 1/(c w + d)^2; |c w + d| > 1 means attracting
    if abs(c * w_near + d) > 1:
        return w_far, w_near
    return w_near, w_far


@dataclass(frozen=True)
class GeodesicLine:
    """Oriented geodesic from e1 to e2 (points of the Riemann sphere)."""

    e1: complex
    e2: complex

    def __post_init__(self):
        if is_inf(self.e1) and is_inf(self.e2):
            raise Degenerate("both endpoints at infinity")
        if not is_inf(self.e1) and not is_inf(self.e2) and self.e1 == self.e2:
            raise Degenerate("endpoints coincide")

    def reversed(self) -> "GeodesicLine":
        return GeodesicLine(self.e2, self.e1)

    def image(self, M: MoebiusMap) -> "GeodesicLine":
        return GeodesicLine(M(self.e1), M(self.e2))


def axis(M: MoebiusMap) -> GeodesicLine:
    """Axis of a loxodromic map, oriented from repelling to attracting fixed point."""
    lam = complex_length(M)
    if lam.real <= ELLIPTIC_TOL:
        raise Elliptic(f"translation length {lam.real:g} is zero")
    rep, att = fixed_points(M)
    return GeodesicLine(rep, att)


def normalizer(g: GeodesicLine) -> MoebiusMap:
    """A map sending g.e1 to 0 and g.e2 to infinity."""
    e1, e2 = g.e1, g.e2
    if is_inf(e2):
        return MoebiusMap(1 + 0j, -e1, 0j, 1 + 0j)
    if is_inf(e1):
        return MoebiusMap(0j, 1j, 1j, -1j * e2)
    return MoebiusMap.from_entries(1, -e1, 1, -e2)


@dataclass(frozen=True)
class ComplexDistance:
    rho: float
    phi: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")

    @property
    def value(self) -> complex:
        return complex(self.rho, self.phi)


def complex_distance(g1: GeodesicLine, g2: GeodesicLine) -> ComplexDistance:
    """Separation ``rho`` along the common perpendicular and twist angle ``phi``.

    After sending g1 to (0 -> oo), g2 becomes (p -> q).  Scaling by 1/sqrt(pq)
    moves g2 to (v -> 1/v), v^2 = p/q, whose common perpendicular with g1 is
    the line (-1, 1).  The Cayley map k(w) = (w - 1)/(w + 1) straightens that
    perpendicular to (0, oo), where translation along it and rotation about it
    act by multiplication: k(v) = -exp(-rho) exp(-i phi).
    """
    T = normalizer(g1)
    p, q = T(g2.e1), T(g2.e2)
    shared = [
        is_inf(w) or abs(w) < ENDPOINT_TOL or abs(w) > 1 / ENDPOINT_TOL for w in (p, q)
    ]
    if all(shared):
        raise Degenerate("lines coincide")
    if any(shared):
        raise SharedEndpoint("lines share an endpoint")
    v = cmath.sqrt(p / q)
    k = (v - 1) / (v + 1)
    if abs(k) > 1:
        k = 1 / k
    rho = -math.log(abs(k))
    phi = -cmath.phase(-k)
    if rho < 1e-12:
        # intersecting lines: the crossing angle is unsigned
        rho, phi = 0.0, abs(phi)
    if phi <= -math.pi:
        phi += 2 * math.pi
    return ComplexDistance(rho, phi)


# ---------------------------------------------------------------------------
# Interior points, hyperboloid model


@dataclass(frozen=True)
class H3Point:
    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"height must be positive, got {self.t}")

    def hyperboloid(self) -> np.ndarray:
        r2 = abs(self.z) ** 2 + self.t**2
        return np.array(
            [(r2 + 1) / (2 * self.t), self.z.real / self.t, self.z.imag / self.t, (r2 - 1) / (2 * self.t)]
        )

    @classmethod
    def from_hyperboloid(cls, X: np.ndarray) -> "H3Point":
        t = 1.0 / (X[0] - X[3])
        return cls(complex(X[1] * t, X[2] * t), float(t))


def mink(u: np.ndarray, v: np.ndarray) -> float:
    return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3])


def _hyp_dist(X: np.ndarray, Y: np.ndarray) -> float:
    D = X - Y
    s = max(mink(D, D), 0.0)
    return 2 * math.asinh(math.sqrt(s) / 2)


def distance(P: H3Point, Q: H3Point) -> float:
    chord2 = abs(P.z - Q.z) ** 2 + (P.t - Q.t) ** 2
    return 2 * math.asinh(math.sqrt(chord2) / (2 * math.sqrt(P.t * Q.t)))


def _unit_toward(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Unit tangent vector at X pointing toward Y."""
    d = _hyp_dist(X, Y)
    if d == 0:
        raise DegenerateSegment("coincident points")
    return (Y - math.cosh(d) * X) / math.sinh(d)


def _geodesic_point(X: np.ndarray, U: np.ndarray, s: float) -> np.ndarray:
    return math.cosh(s) * X + math.sinh(s) * U


def _tangent_angle(u: np.ndarray, w: np.ndarray) -> float:
    """Angle between unit tangent vectors at the same point."""
    dm, dp = u - w, u + w
    return 2 * math.atan2(math.sqrt(max(mink(dm, dm), 0.0)), math.sqrt(max(mink(dp, dp), 0.0)))


def _dist_to_line(P: np.ndarray, X: np.ndarray, Y: np.ndarray) -> float:
    """Distance from P to the full geodesic through X and Y."""
    U = _unit_toward(X, Y)
    alpha = -mink(P, X)
    beta = mink(P, U)
    N = P - alpha * X - beta * U
    return math.asinh(math.sqrt(max(mink(N, N), 0.0)))


def dist_point_line(P: H3Point, X: H3Point, Y: H3Point) -> float:
    """Distance from P to the geodesic through the interior points X and Y."""
    return _dist_to_line(P.hyperboloid(), X.hyperboloid(), Y.hyperboloid())


def angle_at(P: H3Point, X: H3Point, Y: H3Point) -> float:
    """Interior angle at P between the segments PX and PY."""
    Ph = P.hyperboloid()
    return _tangent_angle(_unit_toward(Ph, X.hyperboloid()), _unit_toward(Ph, Y.hyperboloid()))


def dist_point_geodesic(P: H3Point, g: GeodesicLine) -> float:
    # after moving g to (0, oo): cosh d = |P| / t, so sinh d = |z| / t
    Q = normalizer(g).act(P)
    return math.asinh(abs(Q.z) / Q.t)


def line_through(P: H3Point, Q: H3Point) -> GeodesicLine:
    """The full geodesic through two interior points, oriented from P to Q."""
    X, Y = P.hyperboloid(), Q.hyperboloid()
    U = _unit_toward(X, Y)
    return GeodesicLine(_ideal_point(X - U), _ideal_point(X + U))


def _ideal_point(N: np.ndarray) -> complex:
    den = N[0] - N[3]
    if abs(den) <= 1e-15 * abs(N[0]):
        return INF
    return complex(N[1], N[2]) / den


# ---------------------------------------------------------------------------
# Piecewise geodesic arcs


@dataclass(frozen=True)
class Polyline:
    points: tuple[H3Point, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("a polyline needs at least two points")
        for P, Q in zip(self.points, self.points[1:]):
            if distance(P, Q) == 0:
                raise DegenerateSegment(f"consecutive points coincide at {P}")


@dataclass(frozen=True)
class PolylineStats:
    bend_angles: np.ndarray  # exterior angle at each interior vertex
    samples: list[H3Point]
    v_angles: np.ndarray
    w_angles: np.ndarray
    chord_distances: np.ndarray  # distance of each sample to the endpoint chord
    length: float
    chord: float
    segment_lengths: np.ndarray = field(repr=False)

    @property
    def max_angle(self) -> float:
        return float(max(self.v_angles.max(initial=0.0), self.w_angles.max(initial=0.0)))


def polyline_stats(p: Polyline, samples_per_segment: int = 8) -> PolylineStats:
    """Bend angles, the v/w angles at sampled points, arc length and chord.

    Samples include both ends of every segment.  On segment k the forward
    vector points to X_{k+1} and the backward vector to X_k, so a vertex is
    sampled once with its outgoing and once with its incoming direction.
    Along a segment v decreases and w increases, so the sampled maxima are
    the true maxima.
    """
    H = [P.hyperboloid() for P in p.points]
    X0, Xn = H[0], H[-1]
    seg_len = np.array([_hyp_dist(P, Q) for P, Q in zip(H, H[1:])])
    if np.any(seg_len == 0):
        raise DegenerateSegment("consecutive points coincide")

    bends = []
    for k in range(1, len(H) - 1):
        back = _unit_toward(H[k], H[k - 1])
        fwd = _unit_toward(H[k], H[k + 1])
        bends.append(math.pi - _tangent_angle(back, fwd))

    samples, vs, ws, hs = [], [], [], []
    for k in range(len(H) - 1):
        A = H[k]
        U = _unit_toward(A, H[k + 1])
        for s in np.linspace(0.0, seg_len[k], samples_per_segment + 1):
            P = H[k + 1] if s == seg_len[k] else _geodesic_point(A, U, s)
            fwd = math.sinh(s) * A + math.cosh(s) * U
            if _hyp_dist(P, X0) > 1e-12:
                vs.append(_tangent_angle(fwd, -_unit_toward(P, X0)))
            else:
                vs.append(0.0)
            if _hyp_dist(P, Xn) > 1e-12:
                ws.append(_tangent_angle(-fwd, -_unit_toward(P, Xn)))
            else:
                ws.append(0.0)
            hs.append(_dist_to_line(P, X0, Xn))
            samples.append(H3Point.from_hyperboloid(P))

    return PolylineStats(
        bend_angles=np.array(bends),
        samples=samples,
        v_angles=np.array(vs),
        w_angles=np.array(ws),
        chord_distances=np.array(hs),
        length=float(seg_len.sum()),
        chord=_hyp_dist(X0, Xn),
        segment_lengths=seg_len,
    )


# ---------------------------------------------------------------------------
# Seeded random configurations for property checks


def random_point(rng: np.random.Generator, spread: float = 1.0) -> H3Point:
    z = complex(*rng.uniform(-spread, spread, size=2))
    return H3Point(z, float(math.exp(rng.uniform(-spread, spread))))


def random_unit_tangent(rng: np.random.Generator, X: np.ndarray) -> np.ndarray:
    while True:
        v = rng.normal(size=4)
        v = v + mink(v, X) * X  # project to the tangent space at X
        n2 = mink(v, v)
        if n2 > 1e-8:
            return v / math.sqrt(n2)


def _orthonormal_pair(rng: np.random.Generator, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = random_unit_tangent(rng, X)
    while True:
        w = random_unit_tangent(rng, X)
        w = w - mink(w, u) * u
        n2 = mink(w, w)
        if n2 > 1e-8:
            return u, w / math.sqrt(n2)


def random_moebius(rng: np.random.Generator, scale: float = 1.0) -> MoebiusMap:
    m = rng.normal(scale=scale, size=(2, 2)) + 1j * rng.normal(scale=scale, size=(2, 2))
    return MoebiusMap.from_entries(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def random_loxodromic(rng: np.random.Generator) -> MoebiusMap:
    while True:
        M = random_moebius(rng)
        tr = M.normalized_trace()
        if abs(tr - 2) > 0.1 and length_from_trace(tr).real > 0.05:
            return M


@dataclass(frozen=True)
class Triangle:
    A: H3Point
    B: H3Point
    C: H3Point

    def exterior_angle_at_C(self) -> float:
        return math.pi - angle_at(self.C, self.A, self.B)

    def height_of_C(self) -> float:
        return dist_point_line(self.C, self.A, self.B)


def random_triangle(rng: np.random.Generator, max_side: float = 4.0) -> Triangle:
    """Triangle whose exterior angle at C lies in (0, pi/2)."""
    C = random_point(rng)
    X = C.hyperboloid()
    u, w = _orthonormal_pair(rng, X)
    phi = rng.uniform(1e-3, math.pi / 2)
    inner = math.pi - phi
    dirB = math.cos(inner) * u + math.sin(inner) * w
    a, b = rng.uniform(0.05, max_side, size=2)
    A = H3Point.from_hyperboloid(_geodesic_point(X, u, a))
    B = H3Point.from_hyperboloid(_geodesic_point(X, dirB, b))
    return Triangle(A, B, C)


@dataclass(frozen=True)
class SkewQuadrilateral:
    """X1 X2 Y2 Y1 together with a point Z on the segment X1 X2."""

    X1: H3Point
    X2: H3Point
    Y1: H3Point
    Y2: H3Point
    Z: H3Point

    def v(self) -> float:
        return max(distance(self.X1, self.Y1), distance(self.X2, self.Y2))

    def eta(self) -> float:
        return min(distance(self.X1, self.Z), distance(self.X2, self.Z))

    def u(self) -> float:
        return dist_point_line(self.Z, self.Y1, self.Y2)


def random_skew_quadrilateral(rng: np.random.Generator, max_side: float = 5.0, max_v: float = 1.0) -> SkewQuadrilateral:
    X1 = random_point(rng)
    H1 = X1.hyperboloid()
    U = random_unit_tangent(rng, H1)
    L = rng.uniform(0.1, max_side)
    H2 = _geodesic_point(H1, U, L)
    Hz = _geodesic_point(H1, U, rng.uniform(0.0, L))
    Y = []
    for H in (H1, H2):
        r = rng.uniform(0.0, max_v)
        Y.append(H3Point.from_hyperboloid(_geodesic_point(H, random_unit_tangent(rng, H), r)))
    return SkewQuadrilateral(
        X1, H3Point.from_hyperboloid(H2), Y[0], Y[1], H3Point.from_hyperboloid(Hz)
    )


def random_polyline(
    rng: np.random.Generator, n_segments: int = 6, max_bend: float = 0.15, max_len: float = 2.0
) -> Polyline:
    """Polyline with exterior bend angles at most ``max_bend`` at each vertex."""
    X = random_point(rng).hyperboloid()
    U = random_unit_tangent(rng, X)
    pts = [X]
    for _ in range(n_segments):
        L = rng.uniform(0.1, max_len)
        Y = _geodesic_point(X, U, L)
        fwd = math.sinh(L) * X + math.cosh(L) * U
        side = random_unit_tangent(rng, Y)
        side = side - mink(side, fwd) * fwd
        side /= math.sqrt(mink(side, side))
        bend = rng.uniform(0.0, max_bend)
        U = math.cos(bend) * fwd + math.sin(bend) * side
        X = Y
        pts.append(Y)
    return Polyline(tuple(H3Point.from_hyperboloid(P) for P in pts))


def as_points(seq: Sequence[tuple[complex, float]]) -> list[H3Point]:
    return [H3Point(complex(z), float(t)) for z, t in seq]

"""Limit-set pictures by depth-first word enumeration.

Reduced words in A, B, a = A^-1, b = B^-1 are explored depth first.  A branch
stops when the word is max_depth letters long or when it squeezes the seed
configuration (the attracting fixed points of the four generators) into a set
of chordal diameter below epsilon; below that scale further words add nothing
visible.  Every enumerated word contributes its attracting fixed point (the
fixed point, for parabolic words), and the points falling in the window are
drawn into a binary PPM.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyWindow
from ..ptorus import MarkedGroup

Mat = tuple[complex, complex, complex, complex]

BACKGROUND = (255, 255, 255)
INK = (0, 0, 0)
# safety cap on the number of words, far above what the default settings visit
MAX_WORDS = 2_000_000


@dataclass(frozen=True)
class ImageSpec:
    width: int = 512
    height: int = 512
    window: tuple[float, float, float, float] = (-2.0, 2.0, -2.0, 2.0)  # xmin, xmax, ymin, ymax
    max_depth: int = 12
    epsilon: float = 1e-3

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("image size must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        xmin, xmax, ymin, ymax = self.window
        if not (xmin < xmax and ymin < ymax):
            raise ValueError(f"empty window {self.window}")

    def contains(self, w: complex) -> bool:
        xmin, xmax, ymin, ymax = self.window
        return xmin <= w.real <= xmax and ymin <= w.imag <= ymax


def _mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _apply(m: Mat, w: complex) -> complex:
    a, b, c, d = m
    if cmath.isinf(w):
        return complex(math.inf) if c == 0 else a / c
    den = c * w + d
    if den == 0:
        return complex(math.inf)
    return (a * w + b) / den


def _attracting_point(m: Mat) -> complex:
    """Attracting fixed point; the unique one for parabolic maps."""
    a, b, c, d = m
    h = d - a
    sq = cmath.sqrt(h * h + 4 * b * c)
    q1, q2 = -(h + sq) / 2, -(h - sq) / 2
    q = q1 if abs(q1) >= abs(q2) else q2
    if q == 0:
        # a multiple of the identity
        return complex(math.nan, math.nan)
    roots = (complex(math.inf) if c == 0 else q / c, -b / q)
    # the multiplier is 1/(c w + d)^2 at a finite fixed point and (d/a) = 1/a^2
    # at infinity, so the attracting point maximizes |c w + d| (resp. |a|)
    return max(roots, key=lambda w: abs(a) if cmath.isinf(w) else abs(c * w + d))


def _chordal(u: complex, v: complex) -> float:
    if cmath.isinf(u) and cmath.isinf(v):
        return 0.0
    if cmath.isinf(u):
        return 2 / math.sqrt(1 + abs(v) ** 2)
    if cmath.isinf(v):
        return 2 / math.sqrt(1 + abs(u) ** 2)
    return 2 * abs(u - v) / math.sqrt((1 + abs(u) ** 2) * (1 + abs(v) ** 2))


def _diameter(points: list[complex]) -> float:
    return max(_chordal(p, q) for i, p in enumerate(points) for q in points[i + 1 :])


def _generators(G: MarkedGroup) -> list[Mat]:
    A, B = G.A, G.B
    Ai, Bi = A.inverse(), B.inverse()
    # letters 0..3 = A, B, a, b; the inverse of letter i is (i + 2) % 4
    return [(M.a, M.b, M.c, M.d) for M in (A, B, Ai, Bi)]


def limit_points(G: MarkedGroup, spec: ImageSpec) -> np.ndarray:
    """Attracting fixed points of the enumerated words, in enumeration order.

    One entry per word; points at infinity are kept so the count is exact.
    """
    gens = _generators(G)
    seeds = [_attracting_point(g) for g in gens]
    out: list[complex] = []
    count = 0
    # explicit stack of (matrix, last letter, depth); children pushed in reverse
    # so the traversal order is the natural lexicographic one
    stack = [(gens[i], i, 1) for i in reversed(range(4))]
    while stack:
        m, last, depth = stack.pop()
        count += 1
        if count > MAX_WORDS:
            break
        out.append(_attracting_point(m))
        if depth >= spec.max_depth:
            continue
        if _diameter([_apply(m, s) for s in seeds]) < spec.epsilon:
            continue
        forbidden = (last + 2) % 4
        for i in reversed(range(4)):
            if i != forbidden:
                stack.append((_mul(m, gens[i]), i, depth + 1))
    return np.array(out, dtype=complex)


def rasterize(points: np.ndarray, spec: ImageSpec) -> np.ndarray:
    xmin, xmax, ymin, ymax = spec.window
    img = np.empty((spec.height, spec.width, 3), dtype=np.uint8)
    img[:] = BACKGROUND
    col = np.floor((points.real - xmin) / (xmax - xmin) * spec.width).astype(int)
    row = np.floor((ymax - points.imag) / (ymax - ymin) * spec.height).astype(int)
    col = np.clip(col, 0, spec.width - 1)
    row = np.clip(row, 0, spec.height - 1)
    img[row, col] = INK
    return img


def ppm_bytes(img: np.ndarray) -> bytes:
    h, w, _ = img.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + img.astype(np.uint8).tobytes()


@dataclass(frozen=True)
class RenderResult:
    points: np.ndarray  # limit points inside the window
    n_enumerated: int
    path: Path | None


def render_limit_set(G: MarkedGroup, spec: ImageSpec, output_path=None) -> RenderResult:
    pts = limit_points(G, spec)
    xmin, xmax, ymin, ymax = spec.window
    finite = pts[np.isfinite(pts)]
    inside = finite[(finite.real >= xmin) & (finite.real <= xmax) & (finite.imag >= ymin) & (finite.imag <= ymax)]
    if inside.size == 0:
        raise EmptyWindow(f"no limit points in window {spec.window}")
    path = None
    if output_path is not None:
        path = Path(output_path)
        path.write_bytes(ppm_bytes(rasterize(inside, spec)))
    return RenderResult(inside, int(pts.size), path)


@dataclass(frozen=True)
class CirclineFit:
    """Circle or line a|w|^2 + Re(conj(beta) w) + c = 0 and the largest point distance to it."""

    a: float
    beta: complex
    c: float
    max_residual: float

    @property
    def is_line(self) -> bool:
        return self.a == 0.0


def _distances(params: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Euclidean distances to the circline without forming center or radius.

    F(w) = a|w - C|^2 - a r^2 factors as a(|w - C| - r)(|w - C| + r), and
    |a||w - C| = |a w + beta/2|, |a| r = sqrt(|beta|^2/4 - ac).  This stays
    accurate for nearly straight circles and covers lines (a = 0).
    """
    a, b1, b2, c = params
    x, y = pts.real, pts.imag
    f = a * (x * x + y * y) + b1 * x + b2 * y + c
    ar = math.sqrt(max((b1 * b1 + b2 * b2) / 4 - a * c, 0.0))
    den = np.hypot(a * x + b1 / 2, a * y + b2 / 2) + ar
    return np.abs(f) / den


def fit_circline(points) -> CirclineFit:
    """Best circline through the points.

    An algebraic fit (smallest right singular vector of [|w|^2, x, y, 1]) is
    polished by least squares on the geometric distances; the reported
    residual is the largest geometric distance.
    """
    from scipy.optimize import least_squares

    pts = np.asarray(points, dtype=complex)
    if pts.size < 3:
        raise ValueError("need at least three points")
    x, y = pts.real, pts.imag
    M = np.column_stack([x * x + y * y, x, y, np.ones_like(x)])
    _, _, vt = np.linalg.svd(M, full_matrices=False)
    p0 = vt[-1]
    p0 = p0 / np.linalg.norm(p0)

    def resid(p):
        return _distances(p / np.linalg.norm(p), pts)

    best = p0
    if resid(p0).max() > 1e-12:
        sol = least_squares(resid, p0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        p1 = sol.x / np.linalg.norm(sol.x)
        if resid(p1).max() < resid(p0).max():
            best = p1
    a, b1, b2, c = best
    return CirclineFit(float(a), complex(b1, b2), float(c), float(resid(best).max()))

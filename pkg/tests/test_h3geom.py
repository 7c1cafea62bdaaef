import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from bendlab import h3geom
from bendlab.errors import Degenerate, DegenerateSegment, Elliptic, ParabolicOrIdentity, SharedEndpoint
from bendlab.h3geom import INF, GeodesicLine, H3Point, MoebiusMap, Polyline

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _det_ok(M: MoebiusMap) -> bool:
    return abs(M.det - 1) <= 1e-12


# compose


def test_compose_with_inverse_is_identity():
    M = h3geom.random_moebius(np.random.default_rng(1))
    assert (M @ M.inverse()).allclose(MoebiusMap.identity(), 1e-12)


def test_identity_is_neutral():
    N = h3geom.random_moebius(np.random.default_rng(2))
    assert (MoebiusMap.identity() @ N).allclose(N, 0)


def test_diagonal_product():
    D = MoebiusMap.diagonal(math.exp(0.5))
    assert (D @ D).allclose(MoebiusMap.diagonal(math.e), 1e-15)


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_products_keep_unit_determinant(seed):
    rng = np.random.default_rng(seed)
    M = h3geom.random_moebius(rng)
    N = h3geom.random_moebius(rng)
    assert _det_ok(M) and _det_ok(N) and _det_ok(M @ N)


# complex length


def test_complex_length_of_diagonal():
    assert abs(h3geom.complex_length(MoebiusMap.diagonal(math.exp(0.75))) - 1.5) <= 1e-14


def test_complex_length_real_trace_three():
    M = MoebiusMap.from_entries(3, -1, 1, 0)
    lam = h3geom.complex_length(M)
    assert abs(lam - 2 * math.acosh(1.5)) <= 1e-14
    assert abs(lam - 1.9248473002384139) <= 1e-12


def test_complex_length_imaginary_trace_round_trip():
    M = MoebiusMap.from_entries(2j, -1, 1, 0)
    lam = h3geom.complex_length(M)
    assert abs(2 * cmath.cosh(lam / 2) - 2j) <= 1e-12
    assert lam.real >= 0 and -math.pi < lam.imag <= math.pi


def test_branch_is_sign_invariant():
    M = h3geom.random_loxodromic(np.random.default_rng(3))
    assert h3geom.complex_length(M) == h3geom.complex_length(-M)


@pytest.mark.parametrize("tr", [2, -2, 2 + 1e-12])
def test_parabolic_traces_rejected(tr):
    with pytest.raises(ParabolicOrIdentity):
        h3geom.length_from_trace(tr)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_complex_length_conjugation_invariant(seed):
    rng = np.random.default_rng(seed)
    M = h3geom.random_loxodromic(rng)
    C = h3geom.random_moebius(rng)
    conj = C @ M @ C.inverse()
    assert abs(h3geom.complex_length(conj) - h3geom.complex_length(M)) <= 1e-10


# axis


def test_axis_of_diagonal():
    g = h3geom.axis(MoebiusMap.diagonal(math.exp(0.5)))
    assert g.e1 == 0 and h3geom.is_inf(g.e2)


def test_axis_is_conjugation_covariant():
    T = MoebiusMap.translation(1)
    g = h3geom.axis(T @ MoebiusMap.diagonal(math.exp(0.5)) @ T.inverse())
    assert abs(g.e1 - 1) <= 1e-15 and h3geom.is_inf(g.e2)


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_axis_endpoints_are_fixed(seed):
    M = h3geom.random_loxodromic(np.random.default_rng(seed))
    g = h3geom.axis(M)
    for w in (g.e1, g.e2):
        image = M(w)
        if h3geom.is_inf(w):
            assert h3geom.is_inf(image) or abs(image) > 1e10
        else:
            assert abs(image - w) <= 1e-10 * max(1.0, abs(w))


def test_axis_points_to_attracting_end():
    M = h3geom.random_loxodromic(np.random.default_rng(4))
    g = h3geom.axis(M)
    w = 0.3 + 0.2j
    for _ in range(200):
        w = M(w)
    assert abs(w - g.e2) <= 1e-8 * max(1.0, abs(g.e2))


def test_elliptic_has_no_axis():
    with pytest.raises(Elliptic):
        h3geom.axis(MoebiusMap.diagonal(cmath.exp(0.4j)))


def test_parabolic_has_no_axis():
    with pytest.raises(ParabolicOrIdentity):
        h3geom.axis(MoebiusMap.translation(1))


# complex distance


ZERO_INF = GeodesicLine(0j, INF)


def test_perpendicular_crossing_lines():
    cd = h3geom.complex_distance(ZERO_INF, GeodesicLine(-1, 1))
    assert abs(cd.rho) <= 1e-15 and abs(cd.phi - math.pi / 2) <= 1e-15


def test_rotated_perpendicular_crossing_lines():
    cd = h3geom.complex_distance(ZERO_INF, GeodesicLine(-1j, 1j))
    assert abs(cd.rho) <= 1e-15 and abs(cd.phi - math.pi / 2) <= 1e-15


def test_symmetric_pair_about_the_axis_intersects_it():
    # the semicircle over {-e^s, e^s} passes through the point above 0, so it meets {0, oo}
    s = 0.7
    cd = h3geom.complex_distance(ZERO_INF, GeodesicLine(-math.exp(s), math.exp(s)))
    assert cd.rho <= 1e-12


def _numeric_line_distance(e1: float, e2: float) -> float:
    """Distance from the vertical line over 0 to the semicircle over [e1, e2], by search."""
    c, r = (e1 + e2) / 2, (e2 - e1) / 2

    def dist(u):
        P = H3Point(complex(c + r * math.cos(u)), r * math.sin(u))
        return h3geom.dist_point_geodesic(P, ZERO_INF)

    res = minimize_scalar(dist, bounds=(1e-9, math.pi - 1e-9), method="bounded", options={"xatol": 1e-12})
    return res.fun


def test_coplanar_disjoint_lines_at_distance_s():
    # {e^-L, e^L} with tanh(L/2) = e^-s sits at distance s from {0, oo}, in the same vertical plane
    s = 0.7
    L = 2 * math.atanh(math.exp(-s))
    cd = h3geom.complex_distance(ZERO_INF, GeodesicLine(math.exp(-L), math.exp(L)))
    assert abs(cd.rho - s) <= 1e-12
    assert abs(cd.phi) <= 1e-12
    assert abs(_numeric_line_distance(math.exp(-L), math.exp(L)) - s) <= 1e-8


def test_distance_is_symmetric_under_swap():
    rng = np.random.default_rng(5)
    for _ in range(50):
        g1 = h3geom.axis(h3geom.random_loxodromic(rng))
        g2 = h3geom.axis(h3geom.random_loxodromic(rng))
        a, b = h3geom.complex_distance(g1, g2), h3geom.complex_distance(g2, g1)
        assert abs(a.rho - b.rho) <= 1e-12
        assert abs(a.phi - b.phi) <= 1e-9


def test_distance_is_isometry_invariant():
    rng = np.random.default_rng(6)
    g1 = h3geom.axis(h3geom.random_loxodromic(rng))
    g2 = h3geom.axis(h3geom.random_loxodromic(rng))
    C = h3geom.random_moebius(rng)
    a = h3geom.complex_distance(g1, g2)
    b = h3geom.complex_distance(g1.image(C), g2.image(C))
    assert abs(a.rho - b.rho) <= 1e-9 and abs(a.phi - b.phi) <= 1e-9


def test_twisted_lines_at_known_complex_distance():
    # screw motion along the perpendicular (-1, 1) by rho, with rotation phi about it
    rho, phi = 0.9, 0.4
    K = MoebiusMap.from_entries(1, -1, 1, 1)
    screw = MoebiusMap.diagonal(cmath.exp(complex(rho, phi) / 2))
    M = K.inverse() @ screw @ K
    g2 = ZERO_INF.image(M)
    cd = h3geom.complex_distance(ZERO_INF, g2)
    assert abs(cd.rho - rho) <= 1e-12
    assert abs(abs(cd.phi) - phi) <= 1e-12


def test_shared_endpoint_rejected():
    with pytest.raises(SharedEndpoint):
        h3geom.complex_distance(ZERO_INF, GeodesicLine(0j, 1))


def test_coincident_lines_rejected():
    with pytest.raises(Degenerate):
        h3geom.complex_distance(ZERO_INF, GeodesicLine(INF, 0j))


# point to line


def test_point_on_axis():
    assert h3geom.dist_point_geodesic(H3Point(0j, 2), ZERO_INF) == 0


def test_point_off_axis():
    d = h3geom.dist_point_geodesic(H3Point(1 + 0j, 1), ZERO_INF)
    assert abs(d - math.acosh(math.sqrt(2))) <= 1e-15
    # foot of the perpendicular by search along the axis
    foot = minimize_scalar(
        lambda u: h3geom.distance(H3Point(1 + 0j, 1), H3Point(0j, math.exp(u))), bounds=(-3, 3), method="bounded"
    )
    assert abs(foot.fun - d) <= 1e-8


def test_point_on_unit_semicircle():
    assert h3geom.dist_point_geodesic(H3Point(0j, 1), GeodesicLine(-1, 1)) <= 1e-15


def test_point_line_forms_agree():
    rng = np.random.default_rng(7)
    for _ in range(50):
        P, X, Y = (h3geom.random_point(rng) for _ in range(3))
        g = h3geom.line_through(X, Y)
        assert abs(h3geom.dist_point_line(P, X, Y) - h3geom.dist_point_geodesic(P, g)) <= 1e-9


# polylines


def test_collinear_polyline_is_unbent():
    p = Polyline(tuple(H3Point(0j, math.exp(s)) for s in (0.0, 0.5, 1.2, 2.0)))
    stats = h3geom.polyline_stats(p)
    assert np.max(stats.bend_angles) <= 1e-7
    assert abs(stats.chord - stats.length) <= 1e-12


def test_two_segments_with_small_bend():
    X = H3Point(0j, 1).hyperboloid()
    rng = np.random.default_rng(8)
    u, w = h3geom._orthonormal_pair(rng, X)
    A = h3geom._geodesic_point(X, -u, 1.0)
    direction = math.cos(0.1) * u + math.sin(0.1) * w
    B = h3geom._geodesic_point(X, direction, 1.0)
    p = Polyline(tuple(H3Point.from_hyperboloid(P) for P in (A, X, B)))
    stats = h3geom.polyline_stats(p)
    assert abs(stats.bend_angles[0] - 0.1) <= 1e-9
    assert stats.chord >= math.cos(0.1) * 2
    # law of cosines for the interior angle pi - 0.1
    expected = math.acosh(math.cosh(1) ** 2 + math.sinh(1) ** 2 * math.cos(0.1))
    assert abs(stats.chord - expected) <= 1e-12


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_chord_never_exceeds_length(seed):
    stats = h3geom.polyline_stats(h3geom.random_polyline(np.random.default_rng(seed), max_bend=1.0))
    assert stats.chord <= stats.length + 1e-12


def test_repeated_point_rejected():
    P = H3Point(0j, 1)
    with pytest.raises(DegenerateSegment):
        Polyline((P, P))


# inequalities on random configurations


def test_triangle_height_bound():
    rng = np.random.default_rng(100)
    worst = -math.inf
    for _ in range(10_000):
        T = h3geom.random_triangle(rng)
        worst = max(worst, math.tanh(T.height_of_C()) - math.sin(T.exterior_angle_at_C()))
    assert worst <= 1e-12


def test_triangle_generator_respects_angle_range():
    rng = np.random.default_rng(101)
    for _ in range(200):
        phi = h3geom.random_triangle(rng).exterior_angle_at_C()
        assert 0 < phi < math.pi / 2 + 1e-9


def test_skew_quadrilateral_bound():
    rng = np.random.default_rng(102)
    worst = -math.inf
    for _ in range(10_000):
        Q = h3geom.random_skew_quadrilateral(rng)
        worst = max(worst, math.sinh(Q.u()) - math.sinh(Q.v()) / math.cosh(Q.eta()))
    assert worst <= 1e-12


def test_polyline_chord_bound():
    rng = np.random.default_rng(103)
    used = 0
    for _ in range(500):
        stats = h3geom.polyline_stats(h3geom.random_polyline(rng, max_bend=0.3))
        phi = stats.max_angle
        if phi < math.pi / 2:
            used += 1
            assert stats.chord >= math.cos(phi) * stats.length - 1e-12
    assert used > 100


def test_polyline_stays_near_chord():
    rng = np.random.default_rng(104)
    used = 0
    for _ in range(500):
        stats = h3geom.polyline_stats(h3geom.random_polyline(rng, max_bend=0.15))
        phi = stats.max_angle
        if phi <= math.pi / 4:
            used += 1
            assert np.all(np.tanh(stats.chord_distances) <= math.sin(2 * phi) + 1e-12)
    assert used > 100

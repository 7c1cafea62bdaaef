import math

import numpy as np
import pytest

from bendlab import bendsolve, ptorus
from bendlab.bendsolve import BendingAngles
from bendlab.errors import EmptyWindow
from bendlab.lab import render
from bendlab.lab.render import ImageSpec
from bendlab.ptorus import TraceTriple

SMALL = ImageSpec(width=64, height=48, max_depth=8, epsilon=1e-2)


@pytest.fixture(scope="module")
def fuchsian():
    return ptorus.group_from_triple(TraceTriple(3, 3, 3))


def test_fuchsian_limit_set_is_a_circline(fuchsian):
    res = render.render_limit_set(fuchsian, ImageSpec(max_depth=10, epsilon=1e-3))
    fit = render.fit_circline(res.points)
    assert fit.max_residual <= 1e-6


def test_bent_limit_set_is_not_round():
    G = bendsolve.group_from_bending(BendingAngles(math.pi / 4, math.pi / 4))
    res = render.render_limit_set(G, ImageSpec(max_depth=10, epsilon=1e-3))
    assert render.fit_circline(res.points).max_residual > 1e-3


def test_circline_fit_examples():
    t = np.linspace(0, 2 * np.pi, 50, endpoint=False)
    circle = 1.5 + 0.5j + 2 * np.exp(1j * t)
    fit = render.fit_circline(circle)
    assert fit.max_residual <= 1e-12 and not fit.is_line
    assert abs(-fit.beta / (2 * fit.a) - (1.5 + 0.5j)) <= 1e-12
    line = (1 + 1j) * np.linspace(-3, 3, 20) + 0.25
    assert render.fit_circline(line).max_residual <= 1e-12
    square = np.array([1, 1j, -1, -1j, 0.5])
    assert render.fit_circline(square).max_residual > 0.1
    with pytest.raises(ValueError):
        render.fit_circline([0, 1])


def test_output_is_byte_identical(tmp_path, fuchsian):
    p1, p2 = tmp_path / "a.ppm", tmp_path / "b.ppm"
    render.render_limit_set(fuchsian, SMALL, p1)
    render.render_limit_set(fuchsian, SMALL, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_ppm_header(tmp_path, fuchsian):
    p = tmp_path / "a.ppm"
    res = render.render_limit_set(fuchsian, SMALL, p)
    data = p.read_bytes()
    header = b"P6\n64 48\n255\n"
    assert data.startswith(header) and len(data) == len(header) + 64 * 48 * 3
    assert res.path == p
    pixels = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(48, 64, 3)
    assert (pixels == 0).all(axis=2).any() and (pixels == 255).all(axis=2).any()


def test_point_count_grows_with_depth(fuchsian):
    counts = [render.render_limit_set(fuchsian, ImageSpec(max_depth=k, epsilon=1e-9)).n_enumerated for k in (2, 4, 6)]
    assert counts == [4 + 4 * 3, sum(4 * 3**i for i in range(4)), sum(4 * 3**i for i in range(6))]


def test_powers_of_the_diagonal_generator_fix_infinity(fuchsian):
    pts = render.limit_points(fuchsian, ImageSpec(max_depth=3, epsilon=1e-9))
    # A, AA, AAA are the only words whose attracting point is infinity
    assert np.count_nonzero(~np.isfinite(pts)) == 3
    assert pts[0] == complex(math.inf)


def test_empty_window(fuchsian):
    with pytest.raises(EmptyWindow):
        render.render_limit_set(fuchsian, ImageSpec(window=(100, 101, 100, 101), max_depth=4))


@pytest.mark.parametrize(
    "kwargs",
    [dict(width=0), dict(height=-1), dict(epsilon=0), dict(max_depth=0), dict(window=(1, 0, 0, 1))],
)
def test_bad_spec(kwargs):
    with pytest.raises(ValueError):
        ImageSpec(**kwargs)

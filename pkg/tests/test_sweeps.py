import math
from dataclasses import replace

import numpy as np
import pytest

from bendlab.bendsolve import BendingAngles
from bendlab.errors import InconsistentInputs, SweepError
from bendlab.lab import sweeps
from bendlab.lab.fit import fit_slope
from bendlab.minima import Weights

W = Weights(1, 2)


@pytest.fixture(scope="module")
def records():
    return sweeps.sweep_theta(W)


def test_rates(records):
    th = [r.theta for r in records]
    assert 0.98 <= fit_slope(th, [r.d for r in records]).slope <= 1.02
    for col in ("gap_alpha", "gap_beta"):
        f = fit_slope(th, [getattr(r, col) for r in records])
        assert 1.9 <= f.slope <= 2.1 and f.r_squared >= 0.999


def test_records_are_consistent(records):
    for r in records:
        product, side = r.residuals()
        assert product <= sweeps.PRODUCT_TOL and side <= sweeps.SIDE_TOL
        assert r.theta_alpha == W.a * r.theta and r.theta_beta == W.b * r.theta
        assert abs(r.re_z - r.x * r.y / 2) <= 1e-12 * r.x * r.y


def test_bend_shrinks_with_theta(records):
    im = [r.im_z for r in records]
    dist = [r.dist_to_minimum for r in records]
    assert all(b > a for a, b in zip(im, im[1:]))
    assert all(b > a for a, b in zip(dist, dist[1:]))


def test_tampered_record_is_rejected(records):
    bad = replace(records[0], d=records[0].d * 1.01)
    with pytest.raises(InconsistentInputs):
        bad.check()
    with pytest.raises(InconsistentInputs):
        sweeps.records_to_csv([bad])


def test_diagonal_sweep():
    recs = sweeps.diagonal_sweep(Weights(1, 1))
    n = np.array(sweeps.DEFAULT_N_GRID)
    assert [r.theta for r in recs] == [1 / k**2 for k in n]
    for r, k in zip(recs, n):
        assert abs(r.theta_alpha - (1 + 1 / k) / k**2) <= 1e-18
        assert abs(r.theta_beta - (1 - 1 / (2 * k)) / k**2) <= 1e-18
    tail = [r.dist_to_minimum for r, k in zip(recs, n) if k >= 100]
    assert all(b < a for a, b in zip(tail, tail[1:]))
    assert recs[-1].dist_to_minimum <= 1e-3


def test_diagonal_without_drift_matches_theta_sweep():
    n_grid = (10, 30, 100)
    a = sweeps.diagonal_sweep(W, n_grid, drift=False)
    b = sweeps.sweep_theta(W, [1 / k**2 for k in n_grid])
    assert a == b


def test_diagonal_rejects_bad_n():
    with pytest.raises(ValueError):
        sweeps.diagonal_sweep(W, (10, 0))


def test_divergence_sweep():
    res = sweeps.divergence_sweep(k=2.0)
    assert abs(res.fit.slope + 1) <= 0.03
    assert all(math.isnan(r.dist_to_minimum) for r in res.records)
    with pytest.raises(ValueError):
        sweeps.divergence_sweep(k=1.0)


def test_sweep_error_reports_theta():
    with pytest.raises(SweepError) as info:
        sweeps.sweep_theta(Weights(1, 1), [0.1, 4.0])
    assert info.value.theta == 4.0


def test_csv_is_deterministic_and_round_trips(tmp_path, records):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    sweeps.write_csv(records, p1)
    sweeps.write_csv(sweeps.sweep_theta(W), p2)
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_bytes().decode()
    assert "\r" not in text and text.splitlines()[0] == ",".join(sweeps.COLUMNS)
    assert sweeps.read_csv(p1) == records


def test_nan_survives_csv(tmp_path):
    rec = sweeps.make_record(0.01, BendingAngles(0.01, 0.02))
    p = tmp_path / "n.csv"
    sweeps.write_csv([rec], p)
    back = sweeps.read_csv(p)[0]
    assert math.isnan(back.dist_to_minimum) and back.d == rec.d


def test_read_csv_rejects_foreign_files(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        sweeps.read_csv(p)

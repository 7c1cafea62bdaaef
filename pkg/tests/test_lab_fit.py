import numpy as np
import pytest

from bendlab.errors import InsufficientPoints, NonPositiveData
from bendlab.lab.fit import fit_slope


def test_linear_and_quadratic():
    x = np.geomspace(1e-3, 1e-1, 10)
    assert abs(fit_slope(x, 2 * x).slope - 1) <= 1e-12
    f = fit_slope(x, 5 * x**2)
    assert abs(f.slope - 2) <= 1e-12 and abs(f.intercept - np.log(5)) <= 1e-12
    assert f.r_squared == pytest.approx(1.0, abs=1e-12) and f.n_points == 10


def test_exact_power_law():
    x = np.geomspace(0.5, 40, 25)
    f = fit_slope(x, 0.7 * x**-1.25)
    assert abs(f.slope + 1.25) <= 1e-12


def test_noisy_power_law():
    rng = np.random.default_rng(4)
    x = np.geomspace(1e-3, 1, 40)
    y = 3 * x**1.5 * np.exp(rng.normal(0, 0.05, size=x.size))
    f = fit_slope(x, y)
    assert 1.45 <= f.slope <= 1.55
    assert 0.99 <= f.r_squared < 1


def test_constant_data_has_zero_slope():
    f = fit_slope([1, 2, 3, 4, 5], [2.0] * 5)
    assert abs(f.slope) <= 1e-15 and f.r_squared == 1.0


def test_errors():
    with pytest.raises(InsufficientPoints):
        fit_slope([1, 2, 3, 4], [1, 2, 3, 4])
    with pytest.raises(NonPositiveData):
        fit_slope([1, 2, 3, 4, 5], [1, 2, 0, 4, 5])
    with pytest.raises(NonPositiveData):
        fit_slope([-1, 2, 3, 4, 5], [1, 2, 3, 4, 5])
    with pytest.raises(ValueError):
        fit_slope([1, 2, 3, 4, 5], [1, 2, 3, 4])

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mralab import special_functions as sf
from mralab.errors import ConvergenceError, DomainError

mpmath.mp.dps = 30


def test_gamma_values():
    assert sf.gamma(0.5) == pytest.approx(1.772453850905516, rel=1e-15)
    assert sf.gamma(5.0) == 24.0
    with pytest.raises(DomainError):
        sf.gamma(0.0)


@given(st.floats(0.05, 30.0))
def test_gamma_recurrence(x):
    assert sf.gamma(x + 1) == pytest.approx(x * sf.gamma(x), rel=1e-13)


def test_bessel_known_values():
    assert abs(sf.bessel_j(1, 1.0) - 0.4400505857449335) < 1e-15
    assert abs(sf.bessel_j(0, 1.0) - 0.7651976865579666) < 1e-15
    assert sf.bessel_j(0, 0.0) == 1.0
    assert sf.bessel_j(2, 0.0) == 0.0


@pytest.mark.parametrize("alpha", [0, 1, 2, 0.5, 2.5, -1, -3])
@pytest.mark.parametrize("z", [0.1, 1.0, 3.7, 7.5, 2 + 1j, -4.2])
def test_bessel_vs_mpmath(alpha, z):
    ref = complex(mpmath.besselj(alpha, z))
    got = sf.bessel_j(alpha, z)
    assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


@given(st.integers(0, 5), st.floats(0.0, 8.0))
def test_jv_kernel_matches_scipy_inside_radius(n, x):
    from scipy.special import jv

    assert abs(sf.jv_kernel(n, np.array([x]))[0] - jv(n, x)) < 1e-13


def test_negative_integer_order_reflection():
    for n in range(1, 5):
        assert abs(sf.bessel_j(-n, 2.3) - (-1) ** n * sf.bessel_j(n, 2.3)) < 1e-15


def test_series_nonconvergence_raises():
    with pytest.raises(ConvergenceError):
        sf.bessel_j(0, 30.0, sf.SeriesParams(max_terms=5))


def test_series_params_validation():
    with pytest.raises(DomainError):
        sf.SeriesParams(rel_tol=0.0)
    with pytest.raises(DomainError):
        sf.SeriesParams(max_terms=0)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize("x,y", [(0.0, 0.0), (0.5, 1.5), (2.0, 2.0), (1.0, 0.25)])
def test_addition_formula(n, x, y):
    assert sf.addition_formula_residual(n, x, y, K=40) < 1e-10


def test_addition_formula_small_K_is_visible():
    assert sf.addition_formula_residual(0, 2.0, 2.0, K=1) > 1e-3


@pytest.mark.parametrize("nu", [0, 1, 2, 3])
@pytest.mark.parametrize("k", [-2, -1, 1, 2, 3])
@pytest.mark.parametrize("z", [0.7, 2.5, 1 + 0.5j])
def test_half_turn_phase(nu, k, z):
    ref = sf.bessel_j(nu, z * cmath.exp(1j * math.pi * k))
    got = sf.half_turn_phase(nu, k, z)
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))

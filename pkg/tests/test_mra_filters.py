import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mralab import mra_filters as mf
from mralab.errors import DomainError, GridError, NormalizationError

VARIANT_Q = [("root", None), ("qroot", 0.5), ("qradial", 0.5)]


def test_haar_inner_values():
    assert mf.haar_xnu_inner(0, 1) == pytest.approx(0.25, abs=1e-15)
    assert mf.haar_xnu_inner(1, 1) == 0.0
    assert mf.haar_xnu_inner(-1, 1) == 0.0
    assert mf.haar_xnu_inner(0, 2) == pytest.approx(1 / 6, abs=1e-15)


@pytest.mark.parametrize("nu", [1, 2, 3])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_sector_inner_closed_form(nu, m):
    a = 2 * math.pi / m
    ref = (cmath.exp(1j * a * (nu + 1)) - 1) / (1j * (nu + 1)) / (nu + 2)
    assert abs(mf.sector_inner(0, 0, nu, m) - ref) < 1e-15
    assert abs(mf.sector_inner_quadrature(0, 0, nu, m) - ref) < 1e-12


@pytest.mark.parametrize("k,N", [(1, 0), (-1, 0), (0, 1), (0, 2)])
def test_sector_inner_disjoint(k, N):
    assert mf.sector_inner(k, N, 1, 3) == 0
    assert abs(mf.sector_inner_quadrature(k, N, 1, 3)) < 1e-12


def test_sector_full_turn_is_identity():
    assert mf.sector_inner(0, 3, 1, 3) == mf.sector_inner(0, 0, 1, 3)


def test_sector_deformed_radial_factor():
    q, nu = 0.5, 1
    base = mf.sector_inner(0, 0, nu, 2) * (nu + 2)
    got = mf.sector_inner(0, 0, nu, 2, deformed=q)
    assert abs(got - base * (1 - q) / (1 - q ** (nu + 2))) < 1e-15


def test_sector_step_validation():
    with pytest.raises(DomainError):
        mf.SectorStep(0)
    with pytest.raises(DomainError):
        mf.SectorStep(3, 0, 5)


def test_normalization_constants():
    assert mf.normalization_constant("root", 2).value == 0.5
    assert mf.normalization_constant("c", 2).value == 0.5
    q = 0.5
    assert mf.normalization_constant("qroot", 1, q).value == pytest.approx((1 - q) / (1 - q**3))
    assert mf.normalization_constant("qradial", 1, q).value == pytest.approx(1 / (1 - q**4))
    with pytest.raises(DomainError):
        mf.normalization_constant("qroot", 1)


@pytest.mark.parametrize("variant,q", VARIANT_Q)
@pytest.mark.parametrize("nu", [1, 2, 3])
def test_constant_profile_is_normalized(variant, q, nu):
    grid = mf.default_grid(variant, nu)
    assert mf.orbit_normalization_residual(mf.constant_m0(variant, nu, q), variant, grid, nu, q) < 1e-14


@pytest.mark.parametrize("variant,q", VARIANT_Q)
def test_zero_profile_residual_is_one(variant, q):
    grid = mf.default_grid(variant, 1)
    zero = lambda z: np.zeros(np.shape(z), complex)
    assert mf.orbit_normalization_residual(zero, variant, grid, 1, q) == 1.0
    with pytest.raises(NormalizationError):
        mf.normalize_on_orbits(zero, variant, grid, 1, q)


def test_constant_completion_nu1():
    bank = mf.complete_filter_bank(mf.constant_m0("root", 1), "root", nu=1)
    M = mf.matrix_M(bank, 0)
    s = 1 / math.sqrt(2)
    assert np.allclose(M, [[s, s], [s, -s]], atol=1e-15)


def test_completion_of_unit_vector():
    # rows proportional to +e0 and -e0 are completed without a special case
    grid = np.array([1.0 + 0j])
    for sign in (1.0, -1.0):
        amp = np.sqrt(mf.orbit_scale("root", 2) * mf.branch_weights("root", 2))
        row = np.array([[sign, 0, 0]]) / amp
        bank = mf.complete_filter_bank(row, "root", grid, 2)
        assert mf.unitarity_residual(bank) < 1e-15
        assert np.allclose(mf.matrix_M(bank, 0)[0], [sign, 0, 0])


@pytest.mark.parametrize("variant,q", VARIANT_Q)
@pytest.mark.parametrize("nu", [1, 2, 3])
def test_completion_is_unitary(variant, q, nu):
    from mralab.cuntz_rep import default_profile

    grid = mf.default_grid(variant, nu)
    m0 = mf.normalize_on_orbits(default_profile, variant, grid, nu, q)
    bank = mf.complete_filter_bank(m0, variant, grid, nu, q)
    assert mf.unitarity_residual(bank) < 1e-12
    assert mf.orbit_normalization_residual(bank.filters[0], variant, grid, nu, q) < 1e-10


complex_rows = arrays(np.float64, (16, 2, 3), elements=st.floats(-1, 1)).filter(
    lambda a: np.all(np.linalg.norm(a[:, 0] + 1j * a[:, 1], axis=1) > 1e-3)
)


@given(complex_rows)
def test_random_rows_complete_unitarily(a):
    rows = a[:, 0] + 1j * a[:, 1]
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    amp = np.sqrt(mf.orbit_scale("root", 2) * mf.branch_weights("root", 2))
    grid = mf.default_grid("root", 2, 16)
    bank = mf.complete_filter_bank(rows / amp, "root", grid, 2)
    assert mf.unitarity_residual(bank) < 1e-12
    assert np.allclose(bank.matrices()[:, 0, :], rows, atol=1e-14)


def test_unnormalized_row_is_rejected():
    grid = mf.default_grid("root", 1, 4)
    with pytest.raises(NormalizationError):
        mf.complete_filter_bank(np.ones((4, 2)), "root", grid, 1)


def test_bank_json_roundtrip_is_exact():
    bank = mf.complete_filter_bank(mf.constant_m0("qradial", 2, 0.3), "qradial", nu=2, q=0.3)
    back = mf.FilterBank.from_json(bank.to_json())
    assert np.array_equal(back.filters, bank.filters)
    assert np.array_equal(back.grid, bank.grid)
    assert back.q == bank.q and back.variant == bank.variant


def test_off_grid_point():
    bank = mf.complete_filter_bank(mf.constant_m0("root", 1), "root", nu=1)
    with pytest.raises(GridError):
        mf.matrix_M(bank, 0.3 + 0.1j)
    with pytest.raises(GridError):
        mf.matrix_M(bank, 10_000)


def test_zero_bank_residual_one():
    grid = mf.default_grid("root", 1, 8)
    bank = mf.FilterBank(1, "root", None, grid, np.zeros((2, 8, 2)))
    assert mf.unitarity_residual(bank) == 1.0


def test_bank_shape_check():
    with pytest.raises(GridError):
        mf.FilterBank(1, "root", None, np.ones(3), np.zeros((2, 4, 2)))


def test_orbits():
    pts = mf.orbit_points("qradial", 2, [1.0], 0.5)
    assert np.allclose(pts, [[1, 0.5, 0.25]])
    pts = mf.orbit_points("root", 1, [1j], None)
    assert np.allclose(pts, [[1j, -1j]])
    assert np.allclose(pts[0] ** 2, -1)


def test_build_m0_exponent_variants():
    t = np.array([0.5, 1.0])
    c = mf.FilterCoeffs({1: 1.0}, nu=1)
    # with k = 1 both exponents give the same k^e
    assert np.allclose(mf.build_m0(c, t), mf.build_m0(c, t, second_exponent="nu"))
    c2 = mf.FilterCoeffs({2: 1.0}, nu=1)
    assert np.array_equal(mf.build_m0(c2, t), mf.build_m0(c2, t, second_exponent="nu+1"))
    assert not np.allclose(mf.build_m0(c2, t), mf.build_m0(c2, t, second_exponent="nu"))
    with pytest.raises(DomainError):
        mf.build_m0(c, t, second_exponent="x")


def test_build_m0_matches_haar_hankel_transform():
    # the k-th term is the order-(nu+1) Hankel transform of x^nu 1_[k, k+1] scaled by t^{nu+1}:
    # int_k^{k+1} x^{nu+1} J_nu(x t) dx = [(k+1)^{nu+1} J_{nu+1}((k+1)t) - k^{nu+1} J_{nu+1}(kt)] / t
    from scipy.integrate import quad
    from scipy.special import jv

    nu, k, t = 1, 2, 0.7
    c = mf.FilterCoeffs({k: 1.0}, nu=nu)
    integral = quad(lambda x: x ** (nu + 1) * jv(nu, x * t), k, k + 1, epsabs=1e-14)[0]
    got = mf.build_m0(c, np.array([t]))[0]
    ref = (k + 1) ** (nu + 1) * jv(nu + 1, (k + 1) * t) - k ** (nu + 1) * jv(nu + 1, k * t)
    assert abs(got - ref) < 1e-12
    assert abs(ref / t - integral) < 1e-12


def test_real_line_identity_needs_nu():
    with pytest.raises(DomainError):
        mf.real_line_m0_identity(lambda s: s, [0.5])

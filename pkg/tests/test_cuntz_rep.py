import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mralab import cuntz_rep as cz
from mralab import mra_filters as mf
from mralab.errors import DomainError, GridError, NormalizationError

SYSTEMS = [("root", None), ("qroot", 0.5), ("qradial", 0.5)]


@pytest.mark.parametrize("variant,q", SYSTEMS)
@pytest.mark.parametrize("nu", [1, 2, 3])
def test_cuntz_relations(variant, q, nu):
    res = cz.cuntz_residuals(cz.CuntzSystem(variant, nu, q))
    assert res["isometry"] < 1e-10
    assert res["completeness"] < 1e-10


@pytest.mark.parametrize("variant,q", SYSTEMS)
def test_dense_relations_and_adjoint(variant, q):
    res = cz.dense_cuntz_residuals(cz.CuntzSystem(variant, 1, q, k_min=-1, k_max=1, A=2))
    assert res["isometry"] < 1e-10
    assert res["completeness"] < 1e-10
    assert res["adjoint"] < 1e-12


@pytest.mark.parametrize("variant,q", SYSTEMS)
def test_S_is_isometric_on_random_vector(variant, q):
    sys_ = cz.CuntzSystem(variant, 2, q)
    f = sys_.random(np.random.default_rng(1))
    for k in range(3):
        assert abs(cz.apply_S(k, f, sys_).norm() - 1.0) < 1e-12
        back = cz.apply_S_star(k, cz.apply_S(k, f, sys_), sys_)
        assert np.allclose(back.values, f.values, atol=1e-12)


def test_zero_bank_completeness_is_one():
    def zero_bank(grid):
        return mf.FilterBank(1, "root", None, grid, np.zeros((2, grid.size, 2)))

    res = cz.cuntz_residuals(cz.CuntzSystem("root", 1, bank_factory=zero_bank))
    assert res["completeness"] == pytest.approx(1.0)
    assert res["isometry"] == pytest.approx(1.0)


def test_partition_interval_examples():
    assert cz.partition_interval(cz.NAdicWord((1,), 2)) == (Fraction(1, 2), Fraction(1))
    assert cz.partition_interval(cz.NAdicWord((0, 1), 3)) == (Fraction(1, 9), Fraction(2, 9))
    assert cz.partition_interval(cz.NAdicWord((), 3)) == (Fraction(0), Fraction(1))
    with pytest.raises(DomainError):
        cz.partition_interval(cz.NAdicWord((0,), 2), N=3)


@given(st.integers(2, 5), st.integers(0, 4))
def test_partition_is_exact_cover(N, length):
    ivs = [cz.partition_interval(w) for w in cz.all_words(N, length)]
    assert ivs[0][0] == 0 and ivs[-1][1] == 1
    for (a, b), (c, d) in zip(ivs, ivs[1:]):
        assert b == c and a < b


def test_word_validation_and_strings():
    w = cz.NAdicWord.from_string("012", 3)
    assert w.letters == (0, 1, 2) and w.to_string() == "012"
    assert w.extend(1).letters == (0, 1, 2, 1)
    with pytest.raises(DomainError):
        cz.NAdicWord((2,), 2)
    with pytest.raises(DomainError):
        cz.NAdicWord((), 1)


@pytest.mark.parametrize("variant,q", SYSTEMS)
def test_pvm_unity_and_refinement(variant, q):
    sys_ = cz.CuntzSystem(variant, 1, q, k_min=-2, k_max=2, A=2)
    f = sys_.random(np.random.default_rng(5), level=3)
    for length in range(4):
        mus = {w.letters: cz.pvm_measure(f, w, sys_) for w in cz.all_words(2, length)}
        assert abs(math.fsum(mus.values()) - 1.0) < 1e-10
        if length < 3:
            for w in mus:
                kids = math.fsum(cz.pvm_measure(f, cz.NAdicWord(w + (b,), 2), sys_) for b in range(2))
                assert abs(mus[w] - kids) < 1e-10


def test_pvm_input_checks():
    sys_ = cz.CuntzSystem("root", 1)
    f = sys_.random(np.random.default_rng(0), level=1)
    with pytest.raises(GridError):
        cz.pvm_measure(f, cz.NAdicWord((0, 0), 2), sys_)
    g = f.with_values(2 * f.values)
    with pytest.raises(NormalizationError):
        cz.pvm_measure(g, cz.NAdicWord((0,), 2), sys_)
    with pytest.raises(GridError):
        cz.apply_S_star(0, sys_.random(np.random.default_rng(0)), sys_)


@pytest.mark.parametrize("variant,q", SYSTEMS[:2])
@pytest.mark.parametrize("normalizer", ["dft", "constant", 2.5])
def test_cyclic_roundtrip(variant, q, normalizer):
    bank = cz.CuntzSystem(variant, 2, q).bank(0)
    A = cz.cyclic_fourier(bank, normalizer)
    back = cz.cyclic_fourier_inverse(A, bank, normalizer)
    assert np.allclose(back, bank.filters, atol=1e-13)


def test_cyclic_monomials_are_unit_coefficients():
    nu = 2
    grid = mf.default_grid("root", nu, 5)
    orbit = mf.orbit_points("root", nu, grid)
    filters = np.stack([orbit**i for i in range(nu + 1)])
    bank = mf.FilterBank(nu, "root", None, grid, filters)
    A = cz.cyclic_fourier(bank)
    assert np.allclose(A, np.eye(nu + 1)[:, :, None] * np.ones(5), atol=1e-14)


def test_cyclic_rejects_qradial():
    bank = cz.CuntzSystem("qradial", 1, 0.5).bank(0)
    with pytest.raises(GridError):
        cz.cyclic_fourier(bank)


def test_lattice_function_json_and_checks():
    sys_ = cz.CuntzSystem("qradial", 1, 0.3)
    f = sys_.random(np.random.default_rng(2), level=1)
    g = cz.LatticeFunction.from_json(f.to_json())
    assert np.array_equal(g.values, f.values) and np.array_equal(g.weights, f.weights)
    assert (g.q, g.level, g.k_min, g.k_max) == (f.q, f.level, f.k_min, f.k_max)
    with pytest.raises(GridError):
        cz.LatticeFunction(0, 1, 2, np.zeros((2, 2)))
    with pytest.raises(GridError):
        cz.LatticeFunction(0, 1, 2, np.zeros((3, 2)), q=0.5)
    with pytest.raises(GridError):
        cz.LatticeFunction(0, 1, 2, np.zeros((2, 2)), -np.ones((2, 2)), q=0.5)


def test_inner_product_is_weighted():
    f = cz.LatticeFunction(0, 0, 2, np.array([[1, 1j]]), np.array([[2.0, 3.0]]), q=0.5)
    assert f.inner(f) == pytest.approx(5.0)
    assert f.norm() == pytest.approx(math.sqrt(5.0))


def test_branch_maps_roundtrip():
    for variant, q in SYSTEMS:
        maps = cz.BranchMaps(variant, 2, q)
        arr = np.arange(3 * 4 * 3).reshape(3, 4, 3)
        assert np.array_equal(maps.to_branches(maps.from_branches(arr), 3, 4), arr)
        with pytest.raises(DomainError):
            maps.sigma(3, 0, 0, 4)


def test_system_needs_q():
    with pytest.raises(DomainError):
        cz.CuntzSystem("qroot", 1)


def test_partition_interval_base_three():
    assert cz.partition_interval(cz.NAdicWord((1, 0), 3)) == (Fraction(1, 3), Fraction(1, 3) + Fraction(1, 9))

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mralab import bwm_quantum as bwm
from mralab.errors import DomainError

Q_SWEEP = (0.3, 0.5, 0.7)
SOLVING = bwm.GVariant("i!=+-j", "i<j", "i+j<0", 1)


def unit(N, a, b):
    e = np.zeros((N, N))
    e[a, b] = 1.0
    return e


def hand_G_m1(q):
    """Literal G for m = 1 from Kronecker products of matrix units."""
    lab = {-1: 0, 0: 1, 1: 2}
    N = 3
    d = q - 1 / q

    def eu(i, j, k, l):
        return np.kron(unit(N, lab[i], lab[j]), unit(N, lab[k], lab[l]))

    G = eu(0, 0, 0, 0)
    for i in (-1, 1):
        G = G + q * eu(i, i, i, i) + eu(i, -i, -i, i) / q
    for i in lab:
        for j in lab:
            if i != j:
                G = G + eu(i, j, j, i)
            if i < j:
                G = G + d * eu(i, i, j, j)
            if j < i:
                G = G - d * q ** ((i + j) / 2) * eu(i, j, -i, -j)
    return G


def test_index_set():
    assert bwm.BIndexSet(2).labels == (-3, -1, 0, 1, 3)
    assert bwm.BIndexSet(1).N == 3
    with pytest.raises(DomainError):
        bwm.BIndexSet(0)


@pytest.mark.parametrize("q", Q_SWEEP)
def test_G_matches_hand_construction(q):
    G = bwm.build_G(1, q)
    assert np.allclose(G.entries, hand_G_m1(q), atol=1e-15)
    I = G.index
    c = I.pos(0) * I.N + I.pos(0)
    assert G.entries[c, c] == 1.0
    for i in (-1, 1):
        r = I.pos(i) * I.N + I.pos(i)
        assert G.entries[r, r] == q


def test_E_direct_is_rank_one():
    for m in (1, 2, 3):
        E = bwm.build_E_direct(m, 0.5).entries
        assert np.linalg.matrix_rank(E) == 1
        assert abs(np.trace(E) - bwm.x_value(m, 0.5)) < 1e-14
        I = bwm.BIndexSet(m)
        c = I.pos(0) * I.N + I.pos(0)
        assert E[c, c] == 1.0


_E2 = [pytest.param(m, q, marks=pytest.mark.xfail(
           strict=True,
           reason="float64 rounding of the 49x49 product leaves ~1.3e-12 at this point"))
       if (m, q) == (3, 0.3) else (m, q)
       for m in (1, 2, 3) for q in Q_SWEEP]


@pytest.mark.parametrize("m,q", _E2)
def test_E_squared_absolute(m, q):
    assert bwm.e_squared_check(bwm.build_E_direct(m, q), m, q) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("q", Q_SWEEP)
def test_E_squared_relative_and_trace(m, q):
    E = bwm.build_E_direct(m, q)
    x = bwm.x_value(m, q)
    assert bwm.e_squared_check(E, m, q) / (x * np.max(np.abs(E.entries))) < 1e-14
    assert abs(np.trace(E.entries) - x) < 1e-12


def test_x_value():
    q = 0.5
    assert bwm.x_value(1, q) == 3.5
    assert bwm.e_squared_check(bwm.build_E_direct(1, q), 1, q) < 1e-12


def test_E_from_G_synthetic():
    q = 0.5
    E, cond = bwm.build_E_from_G(q * np.eye(9), q)
    assert np.max(np.abs(E)) < 1e-15 and cond == pytest.approx(1.0)
    with pytest.raises(bwm.SingularOperatorError):
        bwm.build_E_from_G(np.zeros((9, 9)), q)


def test_E_from_G_solving_variant():
    for m in (1, 2):
        G = bwm.build_G(m, 0.5, SOLVING)
        E, _ = bwm.build_E_from_G(G, 0.5)
        assert np.allclose(E, bwm.build_E_direct(m, 0.5).entries, atol=1e-12)


def test_ybe_trivial_operators():
    N = 3
    assert bwm.ybe_residual(np.eye(N * N)) == 0.0
    flip = sum(np.kron(unit(N, i, j), unit(N, j, i)) for i in range(N) for j in range(N))
    assert bwm.ybe_residual(flip) == 0.0
    # the flip dressed by D (x) D still braids, since D (x) D (x) D commutes with it
    D = np.diag([2.0, 0.5, 3.0])
    assert bwm.ybe_residual(flip @ np.kron(D, D)) < 1e-12
    # a bare diagonal D (x) D does not
    assert bwm.ybe_residual(np.kron(D, D)) > 1.0


@given(st.integers(0, 2**32 - 1))
def test_ybe_routes_agree_on_random(seed):
    A = np.random.default_rng(seed).standard_normal((9, 9))
    a, b = bwm.ybe_routes(A)
    assert abs(a - b) <= bwm.ROUTE_TOL * max(1, a, b)


def test_ybe_literal_fails_and_variant_solves():
    assert bwm.ybe_residual(bwm.build_G(1, 0.5)) > 1.0
    for m in (1, 2):
        assert bwm.ybe_residual(bwm.build_G(m, 0.5, SOLVING)) < 1e-12


def test_variants_enumeration():
    assert len(bwm.DOCUMENTED_VARIANTS) == 32
    assert len({v.name for v in bwm.DOCUMENTED_VARIANTS}) == 32
    assert bwm.LITERAL in bwm.DOCUMENTED_VARIANTS
    with pytest.raises(DomainError):
        bwm.GVariant(cross_exponent=2)


def test_bwm_residuals_synthetic():
    v = np.array([1.0, 2.0, 0.0, 0.0])
    E = np.outer(v, v)
    x, p = float(v @ v), 2.0
    res = bwm.bwm_residuals(np.eye(4) / p, E, p)
    assert res["EG"] < 1e-15
    assert res["EGE"] == pytest.approx(abs(x / p - p) * np.max(E))
    assert res["EGinvE"] == pytest.approx(abs(x * p - 1 / p) * np.max(E))


def test_cubic_synthetic():
    q, p = 0.5, 3.0
    G = np.diag([q, -1 / q, 1 / p, q])
    assert bwm.cubic_residual(G, q, p) < 1e-15
    assert bwm.cubic_residual(G, q, 2.0) == pytest.approx(7 / 108, abs=1e-15)


def test_estimate_p_synthetic():
    q, p = 0.5, 4.0
    est = bwm.estimate_p(np.diag([q, q, -1 / q, 1 / p]), q)
    assert est["n_q"] == 2 and est["n_minus_qinv"] == 1
    assert est["p_spectral"] == pytest.approx(p)
    assert not est["ambiguous"] and est["p_from_x"] is None
    est = bwm.estimate_p(np.diag([q, -1 / q]), q)
    assert est["ambiguous"] and est["p_spectral"] is None


def test_p_from_x():
    assert bwm.p_from_x(1.0, 0.5) == (1.0, -1.0)
    for x in (0.5, 2.0, 3.5):
        for p in bwm.p_from_x(x, 0.3):
            assert abs(p - 1 / p - (x - 1) * (0.3 - 1 / 0.3)) < 1e-12


def test_quantum_dimension_and_trace():
    assert bwm.quantum_dimension(1, 0.5) == pytest.approx(1.3125, abs=1e-15)
    assert bwm.markov_trace(1, 0.5) == pytest.approx(0.19047619047619047, abs=1e-15)
    for m in (1, 2, 3):
        assert abs(bwm.quantum_dimension(m, 0.999) - (2 * m + 1)) < 0.05
        for q in Q_SWEEP:
            assert abs(bwm.markov_trace(m, q) * bwm.quantum_dimension(m, q) - q ** (2 * m)) < 1e-15


@pytest.mark.parametrize("m", [1, 2])
def test_J_and_tau(m):
    q = 0.5
    out = bwm.build_J_and_tau(m, q)
    J, N = out["J"], 2 * m + 1
    assert np.count_nonzero(J) == N
    assert np.count_nonzero(np.fliplr(J) * np.eye(N)) == N
    sign = (-1) ** (N * (N - 1) // 2)
    assert out["det"] == pytest.approx(sign * q ** (N * (N + 1) / 4))
    Jinv = np.linalg.inv(J)
    assert out["tau_norm2"] == pytest.approx(np.sum(Jinv**2))


def test_tensor_json_roundtrip():
    G = bwm.build_G(1, 0.3)
    back = bwm.TensorOperator.from_json(G.to_json())
    assert np.array_equal(back.entries, G.entries) and back.m == 1 and back.q == 0.3
    with pytest.raises(DomainError):
        bwm.TensorOperator(2, bwm.BIndexSet(1), 0.5, np.eye(4))

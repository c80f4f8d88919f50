import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mralab import q_calculus as qc
from mralab.errors import DomainError

mpmath.mp.dps = 40


def test_q_number_values():
    assert qc.q_number(3, 0.5) == 1.75
    assert qc.q_number(0, 0.5) == 0.0
    assert qc.q_number(2, 0.5, base_exponent=2) == 1.25
    assert qc.q_number(3, 0.5, base_exponent=2) == pytest.approx(1.3125, abs=1e-16)


@given(st.integers(1, 40), st.floats(0.01, 0.99))
def test_q_number_is_geometric_sum(n, q):
    assert qc.q_number(n, q) == pytest.approx(math.fsum(q**i for i in range(n)), rel=1e-12)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5])
def test_qparam_domain(q):
    with pytest.raises(DomainError):
        qc.QParam(q)


def test_pochhammer_values():
    assert abs(qc.q_pochhammer(0.5, 0.5, 2) - 0.375) < 1e-16
    assert qc.q_pochhammer(0.3, 0.5, 0) == 1
    ref = float(mpmath.qp(0.5, 0.5))
    assert abs(qc.q_pochhammer(0.5, 0.5) - ref) < 1e-15
    assert abs(ref - 0.2887880950866) < 1e-12


@given(st.floats(-0.9, 0.9), st.floats(0.05, 0.95))
def test_pochhammer_vs_mpmath(a, q):
    assert abs(qc.q_pochhammer(a, q) - float(mpmath.qp(a, q))) < 1e-14


def _qbessel_ref(alpha, x, q, terms=200):
    """Value and absolute term mass of the q-Bessel series, summed in mpmath."""
    alpha, x, q = mpmath.mpf(alpha), mpmath.mpf(x), mpmath.mpf(q)
    pref = mpmath.qp(q ** (alpha + 1), q) / mpmath.qp(q, q) * x**alpha
    t = [
        pref * (-1) ** k * q ** (k * (k + 1) / 2) * x ** (2 * k)
        / (mpmath.qp(q ** (alpha + 1), q, k) * mpmath.qp(q, q, k))
        for k in range(terms)
    ]
    return float(mpmath.fsum(t)), float(mpmath.fsum(abs(v) for v in t))


@pytest.mark.parametrize("alpha", [0, 1, 2.5])
@pytest.mark.parametrize("x", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("q", [0.3, 0.7])
def test_q_bessel_vs_mpmath(alpha, x, q):
    # double rounding costs about eps times the absolute term mass
    ref, mass = _qbessel_ref(alpha, x, q)
    assert abs(qc.q_bessel_j(alpha, x, q) - ref) < 1e-14 * max(1, mass)


_LATTICE_POINTS = [(q, j) for q in (0.3, 0.5, 0.7) for j in (-4, -2, -1, 0, 3) if q**j <= 12]


@pytest.mark.parametrize("alpha", [0, 1])
@pytest.mark.parametrize("q,j", _LATTICE_POINTS)
def test_lattice_bessel_vs_mpmath(alpha, q, j):
    with mpmath.workdps(50):
        ref, _ = _qbessel_ref(alpha, mpmath.mpf(q) ** j, mpmath.mpf(q) ** 2, terms=120)
    got = qc.q_bessel_j_lattice(alpha, j, q)
    assert abs(got - ref) < 1e-11 * max(1, abs(ref))


def test_lattice_bessel_stable_far_out():
    # x = 0.3^-20: the plain series is useless here, the lattice form is not
    v = qc.q_bessel_j_lattice(0, -20, 0.3)
    assert math.isfinite(v) and abs(v) < 1e3


def test_q_integral_single_point():
    lat = qc.QLattice(0, 0)
    assert qc.q_integral(lambda t: np.ones_like(t), 0.5, lat) == 0.5


@given(st.floats(0.1, 0.9), st.floats(-3, 3), st.floats(-3, 3))
def test_q_integral_linear(q, a, b):
    lat = qc.QLattice(0, 200)
    f = lambda t: t
    g = lambda t: t**2
    lhs = qc.q_integral(lambda t: a * f(t) + b * g(t), q, lat)
    rhs = a * qc.q_integral(f, q, lat) + b * qc.q_integral(g, q, lat)
    assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("nu", [0, 1, 2])
def test_jackson_moment_tends_to_classical(nu):
    errs = [abs(qc.q_integral(lambda t: t ** (nu + 1), q, qc.QLattice(0, 4000)) - 1 / (nu + 2))
            for q in (0.9, 0.99, 0.999)]
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_jackson_moment_closed_form(q):
    # (1-q) sum q^{k(n+1)} q^k = (1-q)/(1-q^{n+2})
    n = 2
    got = qc.q_integral(lambda t: t**n, q, qc.QLattice(0, 400))
    assert abs(got - (1 - q) / (1 - q ** (n + 1))) < 1e-14


def test_q_integral_array_input():
    lat = qc.QLattice(0, 3)
    vals = np.arange(4.0)
    q = 0.5
    ref = (1 - q) * sum(v * q**k for k, v in enumerate(vals))
    assert qc.q_integral(vals, q, lat) == pytest.approx(ref)


def test_lattice_window_validation():
    with pytest.raises(DomainError):
        qc.QLattice(5, 1)

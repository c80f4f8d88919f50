"""q-numbers, q-Pochhammer symbols, Jackson q-Bessel functions and q-integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError
from .special_functions import DEFAULT_SERIES, SeriesParams

__all__ = [
    "INFINITY",
    "QParam",
    "QLattice",
    "q_number",
    "q_pochhammer",
    "q_bessel_j",
    "q_bessel_j_array",
    "q_bessel_j_lattice",
    "q_integral",
]

INFINITY = math.inf


@dataclass(frozen=True)
class QParam:
    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must lie in (0, 1), got {self.q}")

    def __float__(self):
        return float(self.q)


@dataclass(frozen=True)
class QLattice:
    """Finite window {q^k : k_min <= k <= k_max} of the geometric lattice."""

    k_min: int = -60
    k_max: int = 60

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise DomainError("k_min must not exceed k_max")

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def points(self, q) -> np.ndarray:
        return float(q) ** self.ks.astype(float)


def _q(q) -> float:
    return float(QParam(float(q)).q)


def q_number(n: int, q, base_exponent: int = 1) -> float:
    """[n]_{q^b} = (1 - q^{bn}) / (1 - q^b)."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if base_exponent not in (1, 2):
        raise DomainError("base_exponent must be 1 or 2")
    qb = _q(q) ** base_exponent
    return (1.0 - qb**n) / (1.0 - qb)


def q_pochhammer(a, q, n=INFINITY) -> complex:
    """(a; q)_n, with n = INFINITY truncated once |a q^j| < 1e-16."""
    qv = _q(q)
    a = complex(a)
    prod = 1.0 + 0j
    if n == INFINITY:
        term = a
        while abs(term) >= 1e-16:
            prod *= 1.0 - term
            term *= qv
        return prod
    n = int(n)
    if n < 0:
        raise DomainError("n must be >= 0 or INFINITY")
    term = a
    for _ in range(n):
        prod *= 1.0 - term
        term *= qv
    return prod


def q_bessel_j_array(alpha, x, q, p: SeriesParams = DEFAULT_SERIES) -> np.ndarray:
    """Vectorised :func:`q_bessel_j`."""
    alpha = float(alpha)
    qv = _q(q)
    x = np.asarray(x, dtype=np.complex128)
    shape = x.shape
    xf = x.ravel()
    y = np.ascontiguousarray(xf * xf)
    sums, _, failed = kernels.q_bessel_sum(alpha, qv, y, p.rel_tol, p.max_terms)
    if failed:
        raise ConvergenceError(
            f"q-Bessel series (alpha={alpha}, q={qv}) did not converge in {p.max_terms} terms"
        )
    pref = (q_pochhammer(qv ** (alpha + 1.0), qv) / q_pochhammer(qv, qv)).real
    if alpha.is_integer():
        xa = xf ** int(alpha)
    else:
        xa = np.power(xf, alpha)
    return (pref * xa * np.asarray(sums)).reshape(shape)


def q_bessel_j(alpha, x, q, p: SeriesParams = DEFAULT_SERIES) -> complex:
    """Jackson (Hahn-Exton) q-Bessel function J_alpha(x; q).

    Summed as ``(q^{a+1};q)_inf / (q;q)_inf * x^a * sum_k (-1)^k q^{k(k+1)/2}
    x^{2k} / ((q^{a+1};q)_k (q;q)_k)``. The ``q^{k(k+1)/2}`` damping makes the
    series converge for every x, but for |x| >> 1 the alternating terms peak
    near ``q^{-(log_q |x|)^2/2}`` and cancellation eats the precision.
    """
    return complex(q_bessel_j_array(alpha, np.array([x]), q, p)[0])


def _log_qpoch_inf(a, qv):
    """log |(a; q)_inf| for real 0 < a, without the 1e-16 truncation drift."""
    acc = 0.0
    t = a
    while t >= 1e-18:
        acc += math.log1p(-t)
        t *= qv
    return acc


def q_bessel_j_lattice(alpha, j: int, q) -> float:
    """J_alpha(q^j; q^2) for an integer exponent j, accurate for j << 0.

    Uses the symmetric representation
    ``J_a(x; Q) = x^a (Q x^2; Q)_inf / (Q; Q)_inf * 1phi1(0; Q x^2; Q, Q^{a+1})``.
    At x = q^j with j < 0 the factor ``(Q^{k+j+1}; Q)_inf`` vanishes for
    k <= -j-1, so the sum starts at k = -j and its terms shrink like
    ``Q^{k^2/2}`` without cancellation.
    """
    alpha = float(alpha)
    qv = _q(q)
    j = int(j)
    if alpha <= -1:
        raise DomainError("alpha must exceed -1")
    if j >= 0:
        return float(q_bessel_j(alpha, qv**j, qv * qv).real)
    Q = qv * qv
    lq = math.log(Q)
    m = -j - 1
    # log (Q;Q)_k for k = m+1 built incrementally
    log_qq_k = sum(math.log1p(-Q**i) for i in range(1, m + 2))
    base = j * alpha * math.log(qv) - _log_qpoch_inf(Q, Q)
    terms = []
    k = m + 1
    while True:
        lt = (k * (k - 1) / 2 + (alpha + 1) * k) * lq + _log_qpoch_inf(Q ** (k - m), Q) - log_qq_k
        terms.append((-1.0) ** k * math.exp(lt + base))
        if lt + base < -745 or (len(terms) > 1 and abs(terms[-1]) < 1e-18 * abs(terms[0])):
            break
        k += 1
        log_qq_k += math.log1p(-Q**k)
    return math.fsum(terms)


def q_integral(f, q, lat: QLattice = QLattice()) -> complex:
    """Jackson q-integral (1 - q) sum_k f(q^k) q^k over the lattice window.

    ``f`` is either a callable evaluated on the lattice points or an array of
    values aligned with ``lat.ks``.
    """
    qv = _q(q)
    pts = lat.points(qv)
    vals = f(pts) if callable(f) else np.asarray(f)
    vals = np.broadcast_to(np.asarray(vals, dtype=np.complex128), pts.shape)
    return complex((1.0 - qv) * np.sum(vals * pts))

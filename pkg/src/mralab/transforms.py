"""Hankel transforms by composite quadrature and q-Hankel transforms on {q^k}."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, GridError, TruncationWarning
from .q_calculus import QLattice, q_bessel_j_array, q_bessel_j_lattice
from .special_functions import jv_kernel

__all__ = [
    "SampledRadialFunction",
    "QuadratureParams",
    "quadrature_rule",
    "hankel_forward",
    "hankel_inverse",
    "hankel_roundtrip_error",
    "plancherel_residual",
    "q_bessel_lattice",
    "q_hankel_forward",
    "q_hankel_inverse",
    "q_hankel_roundtrip_error",
    "q_orthogonality_check",
    "q_jackson_hankel",
    "q_to_classical_error",
]


@dataclass
class SampledRadialFunction:
    nodes: np.ndarray
    values: np.ndarray
    cutoff: float

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.nodes.shape != self.values.shape:
            raise GridError("nodes and values must have the same length")
        if np.any(self.nodes <= 0) or np.any(np.diff(self.nodes) <= 0):
            raise GridError("nodes must be positive and strictly increasing")

    @classmethod
    def from_callable(cls, func, qp: "QuadratureParams"):
        x, _ = quadrature_rule(qp)
        return cls(x, func(x), qp.cutoff)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.nodes.shape == x.shape and np.array_equal(self.nodes, x):
            return self.values
        re = np.interp(x, self.nodes, self.values.real, right=0.0)
        im = np.interp(x, self.nodes, self.values.imag, right=0.0)
        return re + 1j * im


@dataclass(frozen=True)
class QuadratureParams:
    rule: str = "gauss"
    panels: int = 400
    cutoff: float = 12.0
    order: int = 6

    def __post_init__(self):
        if self.rule not in ("gauss", "simpson"):
            raise DomainError(f"unknown quadrature rule {self.rule!r}")
        if self.panels < 1 or not self.cutoff > 0:
            raise DomainError("panels must be >= 1 and cutoff > 0")


@lru_cache(maxsize=32)
def _rule(rule, panels, cutoff, order):
    edges = np.linspace(0.0, cutoff, panels + 1)
    if rule == "gauss":
        g, w = leggauss(order)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        x = (mid[:, None] + half[:, None] * g[None, :]).ravel()
        wt = (half[:, None] * w[None, :]).ravel()
        panel = np.repeat(np.arange(panels), order)
    else:
        # composite Simpson on interior points; x = 0 carries no mass (x dx measure)
        h = cutoff / (2 * panels)
        x = np.arange(1, 2 * panels + 1) * h
        wt = np.where(np.arange(1, 2 * panels + 1) % 2 == 1, 4.0, 2.0) * h / 3.0
        wt[-1] = h / 3.0
        panel = (np.arange(1, 2 * panels + 1) - 1) // 2
    for a in (x, wt, panel):
        a.setflags(write=False)
    return x, wt, panel


def quadrature_rule(qp: QuadratureParams):
    """Nodes and weights of the composite rule on (0, cutoff]."""
    x, w, _ = _rule(qp.rule, qp.panels, float(qp.cutoff), qp.order)
    return x, w


def _values(f, x):
    if isinstance(f, SampledRadialFunction):
        return f(x)
    if callable(f):
        return np.asarray(f(x), dtype=np.complex128)
    raise TypeError("f must be a SampledRadialFunction or a callable")


def _check_tail(contrib, panel, total, what):
    last = np.abs(contrib[..., panel == panel.max()].sum(axis=-1))
    scale = np.maximum(np.abs(total), np.finfo(float).tiny)
    if np.any(last > 1e-8 * scale) and np.any(np.abs(total) > 1e-14):
        warnings.warn(
            f"{what}: last panel carries {float(np.max(last / scale)):.2e} of the integral; "
            "increase the cutoff",
            TruncationWarning,
            stacklevel=3,
        )


def hankel_forward(f, alpha, t, qp: QuadratureParams = QuadratureParams()):
    """int_0^R J_alpha(x t) f(x) x dx by the configured composite rule.

    ``t`` may be a scalar or an array. Emits :class:`TruncationWarning` when
    the last panel holds more than 1e-8 of the total.
    """
    x, w, panel = _rule(qp.rule, qp.panels, float(qp.cutoff), qp.order)
    fx = _values(f, x)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    contrib = jv_kernel(alpha, np.outer(t_arr, x)) * (fx * x * w)[None, :]
    total = contrib.sum(axis=1)
    _check_tail(contrib, panel, total, "hankel_forward")
    return complex(total[0]) if np.ndim(t) == 0 else total


hankel_inverse = hankel_forward  # the order-alpha transform is its own inverse


def _weighted_norm(vals, x, w):
    return math.sqrt(float(np.sum(w * x * np.abs(vals) ** 2)))


@lru_cache(maxsize=8)
def _kernel_matrix(alpha, rule, panels, cutoff, order):
    x, _, _ = _rule(rule, panels, cutoff, order)
    kern = jv_kernel(alpha, np.outer(x, x))
    kern.setflags(write=False)
    return kern


def _kernel(alpha, qp):
    return _kernel_matrix(float(alpha), qp.rule, qp.panels, float(qp.cutoff), qp.order)


def hankel_roundtrip_error(f, alpha, qp: QuadratureParams = QuadratureParams()) -> float:
    """Relative L^2(x dx) distance between f and inverse(forward(f)) on the nodes."""
    x, w, _ = _rule(qp.rule, qp.panels, float(qp.cutoff), qp.order)
    fx = _values(f, x)
    nf = _weighted_norm(fx, x, w)
    if nf == 0.0:
        return 0.0
    kern = _kernel(alpha, qp)
    F = kern @ (fx * x * w)
    back = kern @ (F * x * w)
    return _weighted_norm(back - fx, x, w) / nf


def plancherel_residual(f, g, alpha, qp: QuadratureParams = QuadratureParams()) -> float:
    """|int rho F G d rho - int x f g dx| with F, G the order-alpha transforms."""
    x, w, _ = _rule(qp.rule, qp.panels, float(qp.cutoff), qp.order)
    fx, gx = _values(f, x), _values(g, x)
    kern = _kernel(alpha, qp)
    F = kern @ (fx * x * w)
    G = kern @ (gx * x * w)
    return abs(np.sum(w * x * F * G) - np.sum(w * x * fx * gx))


# -- q-Hankel --------------------------------------------------------------------


@lru_cache(maxsize=64)
def _lattice_table(alpha, q, j_min, j_max):
    js = np.arange(j_min, j_max + 1)
    vals = np.zeros(js.shape)
    nonneg = js >= 0
    if np.any(nonneg):
        vals[nonneg] = q_bessel_j_array(alpha, q ** js[nonneg].astype(float), q * q).real
    for j in range(j_min, min(-1, j_max) + 1):
        vals[j - j_min] = q_bessel_j_lattice(alpha, j, q)
    vals.setflags(write=False)
    return vals


def q_bessel_lattice(alpha, q, js) -> np.ndarray:
    """J_alpha(q^j; q^2) on integer exponents j."""
    js = np.asarray(js, dtype=int)
    lo, hi = int(js.min()), int(js.max())
    table = _lattice_table(float(alpha), float(q), lo, hi)
    return table[js - lo]


def _as_lattice_values(f, lat: QLattice, q):
    if callable(f):
        return np.asarray(f(lat.points(q)), dtype=np.complex128)
    vals = np.asarray(f, dtype=np.complex128)
    if vals.shape != lat.ks.shape:
        raise GridError(f"expected {lat.ks.size} lattice values, got {vals.shape}")
    return vals


def _q_sum(weights_k, f_vals, alpha, q, shift, what):
    """sum_k weights_k J(q^{k+shift}) f_k for an array of shifts."""
    shift = np.atleast_1d(np.asarray(shift, dtype=int))
    ks = weights_k[0]
    js = ks[None, :] + shift[:, None]
    J = q_bessel_lattice(alpha, q, js.ravel()).reshape(js.shape)
    terms = J * (weights_k[1] * f_vals)[None, :]
    total = terms.sum(axis=1)
    edge = np.abs(terms[:, [0, -1]]).max(axis=1)
    scale = np.abs(total)
    if np.any((edge > 1e-12 * scale) & (scale > 1e-300)):
        warnings.warn(f"{what}: boundary terms exceed 1e-12 of the sum; widen the window",
                      TruncationWarning, stacklevel=3)
    return total


def q_hankel_forward(f, alpha, q, n, lat: QLattice = QLattice()):
    """g(q^n) = sum_k q^{2k} J_alpha(q^{k+n}; q^2) f(q^k) over the window."""
    q = float(q)
    fv = _as_lattice_values(f, lat, q)
    ks = lat.ks
    out = _q_sum((ks, q ** (2.0 * ks)), fv, alpha, q, n, "q_hankel_forward")
    return complex(out[0]) if np.ndim(n) == 0 else out


def q_hankel_inverse(g, alpha, q, k, lat: QLattice = QLattice()):
    """f(q^k) = sum_n q^{2n} J_alpha(q^{k+n}; q^2) g(q^n) over the window."""
    return q_hankel_forward(g, alpha, q, k, lat)


def q_hankel_roundtrip_error(f, alpha, q, lat: QLattice = QLattice()) -> float:
    """Relative l^2 error of inverse(forward(f)) on the window (counting measure)."""
    fv = _as_lattice_values(f, lat, q)
    nf = np.linalg.norm(fv)
    if nf == 0:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        g = q_hankel_forward(fv, alpha, q, lat.ks, lat)
        back = q_hankel_inverse(g, alpha, q, lat.ks, lat)
    return float(np.linalg.norm(back - fv) / nf)


def q_orthogonality_check(m, n, alpha, q, window: QLattice = QLattice()) -> complex:
    """sum_k q^{k+n} J(q^{k+n}; q^2) q^{k+m} J(q^{k+m}; q^2), which should be delta_{m,n}."""
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    q = float(q)
    ks = window.ks
    a = q ** (ks + n).astype(float) * q_bessel_lattice(alpha, q, ks + n)
    b = q ** (ks + m).astype(float) * q_bessel_lattice(alpha, q, ks + m)
    terms = a * b
    total = terms.sum()
    if max(abs(terms[0]), abs(terms[-1])) > 1e-12 * max(abs(total), 1.0):
        warnings.warn("q_orthogonality_check: boundary terms exceed 1e-12; widen the window",
                      TruncationWarning, stacklevel=2)
    return complex(total)


def q_jackson_hankel(f, alpha, q, n, k_range):
    """Jackson-integral form of the q-Hankel transform at lambda_n = (1-q)^{-1/2} q^n.

    g_q(lambda) = (1-q) sum_k f(x_k) J_alpha((1-q) lambda x_k; q^2) x_k^2 with
    x_k = (1-q)^{-1/2} q^k, so the Bessel argument is exactly q^{k+n}.
    """
    q = float(q)
    ks = np.arange(k_range[0], k_range[1] + 1)
    s = (1.0 - q) ** -0.5
    xk = s * q ** ks.astype(float)
    fx = np.asarray(f(xk), dtype=np.complex128)
    n = np.atleast_1d(np.asarray(n, dtype=int))
    arg = q ** (ks[None, :] + n[:, None]).astype(float)
    J = q_bessel_j_array(alpha, arg, q * q).real
    return (1.0 - q) * (J * (fx * xk**2)[None, :]).sum(axis=1)


def q_to_classical_error(f, alpha, q, lam_range=(0.5, 3.0), x_range=(1e-8, 10.0),
                         qp: QuadratureParams = QuadratureParams()) -> float:
    """Max |g_q(lambda_n) - g(lambda_n)| over lattice points lambda_n in lam_range.

    ``g`` is the classical transform by quadrature; ``g_q`` the Jackson-integral
    q-transform on the matching lattice.
    """
    q = float(q)
    s = (1.0 - q) ** -0.5
    lq = math.log(q)
    n_lo = math.ceil(math.log(lam_range[1] / s) / lq)
    n_hi = math.floor(math.log(lam_range[0] / s) / lq)
    k_lo = math.floor(math.log(x_range[1] / s) / lq)
    k_hi = math.ceil(math.log(x_range[0] / s) / lq)
    ns = np.arange(n_lo, n_hi + 1)
    lam = s * q ** ns.astype(float)
    gq = q_jackson_hankel(f, alpha, q, ns, (k_lo, k_hi))
    g = hankel_forward(f, alpha, lam, qp)
    return float(np.max(np.abs(gq - g)))

"""Tight frames from Bessel-coefficient filter banks and their q-deformation.

The frame family lives on the lattice tower of :mod:`mralab.cuntz_rep`: for f
on level L the elements are S_0^m S_r e_x (r >= 1, m < L) plus, optionally,
the scaling elements S_0^L e_x, where e_x runs over an orthonormal point basis
of the lower level.  The squared coefficients against one word w therefore add
up to ||S_w^* f||^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .cuntz_rep import CuntzSystem, LatticeFunction, NAdicWord, apply_word_star
from .errors import ConstraintError, DomainError
from .mra_filters import FilterBank
from .q_calculus import QParam, q_bessel_j_array
from .special_functions import jv_kernel

__all__ = [
    "BesselFilterSpec",
    "FrameBounds",
    "FrameTruncation",
    "residue_diagonal_residual",
    "offdiagonal_residual",
    "spec_offdiagonal_residual",
    "solve_diagonal",
    "null_cross_correlation",
    "bessel_filters",
    "bessel_unitarity_residual",
    "deformed_bank_from_bessel",
    "bessel_system",
    "frame_family",
    "frame_ratio",
    "frame_bounds_estimate",
    "scaling_product",
]


def _as_coeffs(b) -> dict[int, complex]:
    if isinstance(b, Mapping):
        return {int(k): complex(v) for k, v in b.items()}
    return {k: complex(v) for k, v in enumerate(b)}


@dataclass(frozen=True)
class BesselFilterSpec:
    """m_0(z) = sum_k b_k J_k(z) (or J_k(z; q) when ``deformed`` holds q)."""

    b: Mapping[int, complex]
    nu: int
    deformed: float | None = None

    def __post_init__(self):
        if int(self.nu) != self.nu or self.nu < 1:
            raise DomainError("nu must be an integer >= 1")
        object.__setattr__(self, "b", _as_coeffs(self.b))
        if self.deformed is not None:
            object.__setattr__(self, "deformed", QParam(self.deformed).q)

    @property
    def diagonal_residual(self) -> float:
        return residue_diagonal_residual(self)


@dataclass(frozen=True)
class FrameBounds:
    A: float
    B: float
    ratios: tuple = field(default=())
    leakage: float = 0.0
    leakage_flag: bool = False

    def __post_init__(self):
        if self.A < 0 or self.B < self.A:
            raise DomainError("frame bounds need 0 <= A <= B")

    def is_tight(self, tol: float = 1e-4) -> bool:
        return abs(self.B - self.A) < tol


@dataclass(frozen=True)
class FrameTruncation:
    """Scales 0..scales-1 of wavelet words, plus the scaling words when asked."""

    scales: int = 3
    include_scaling: bool = True
    leakage_tol: float = 1e-6

    def __post_init__(self):
        if self.scales < 1:
            raise DomainError("at least one scale is needed")


def residue_diagonal_residual(spec: BesselFilterSpec) -> float:
    """|1 - (nu+1) sum_k |b_k|^2 / (k! 2^k)^2|."""
    if any(k < 0 for k in spec.b):
        raise DomainError("the factorial weights need b supported on k >= 0")
    s = math.fsum(abs(v) ** 2 / (math.factorial(k) * 2.0**k) ** 2 for k, v in spec.b.items())
    return abs(1.0 - (spec.nu + 1) * s)


def offdiagonal_residual(b, c, n: int) -> complex:
    """sum_k b_k conj(c_{n+k}) over the finite supports."""
    b, c = _as_coeffs(b), _as_coeffs(c)
    total = 0j
    for k in sorted(b):
        if n + k in c:
            total += b[k] * np.conj(c[n + k])
    return complex(total)


def _shift(b: dict[int, complex], r: int) -> dict[int, complex]:
    # coefficients of m_r = sum_k b_k J_{k+r}, as a series in J_l
    return {k + r: v for k, v in b.items()}


def spec_offdiagonal_residual(spec: BesselFilterSpec) -> float:
    """max_{r = 1..nu} |sum_k b_k conj(c^(r)_k)| with c^(r) the coefficients of m_r."""
    return max(abs(offdiagonal_residual(spec.b, _shift(spec.b, r), 0)) for r in range(1, spec.nu + 1))


def solve_diagonal(b, nu: int) -> dict[int, complex]:
    """Rescale b so the diagonal residue condition holds exactly."""
    b = _as_coeffs(b)
    s = math.fsum(abs(v) ** 2 / (math.factorial(k) * 2.0**k) ** 2 for k, v in b.items())
    if s == 0:
        raise ConstraintError("b vanishes")
    lam = 1.0 / math.sqrt((nu + 1) * s)
    return {k: lam * v for k, v in b.items()}


def null_cross_correlation(b, ns: Sequence[int], support: int, rng=None) -> dict[int, complex]:
    """A unit c on {0..support-1} with sum_k b_k conj(c_{n+k}) = 0 for every n in ns.

    The constraints are linear in conj(c); a random vector is projected onto
    their null space by least squares.
    """
    b = _as_coeffs(b)
    rows = np.zeros((len(ns), support), dtype=np.complex128)
    for i, n in enumerate(ns):
        for k, v in b.items():
            if 0 <= n + k < support:
                rows[i, n + k] += v
    if support <= np.linalg.matrix_rank(rows):
        raise ConstraintError("support too small for a non-trivial null vector")
    rng = np.random.default_rng(0) if rng is None else rng
    x = rng.standard_normal(support) + 1j * rng.standard_normal(support)
    # conj(c) is x minus its least-squares fit onto the row space
    y = x - np.linalg.pinv(rows) @ (rows @ x)
    c = np.conj(y) / np.linalg.norm(y)
    return {k: complex(v) for k, v in enumerate(c)}


def bessel_filters(spec: BesselFilterSpec, points) -> np.ndarray:
    """(nu+1, ...) array of m_r(z) = sum_k b_k J_{k+r}(z) (q-Bessel when deformed)."""
    z = np.asarray(points, dtype=np.complex128)
    out = np.zeros((spec.nu + 1,) + z.shape, dtype=np.complex128)
    for r in range(spec.nu + 1):
        for k, v in sorted(spec.b.items()):
            if v == 0:
                continue
            order = k + r
            if spec.deformed is None:
                out[r] += v * jv_kernel(order, z)
            else:
                if order < 0:
                    raise DomainError("q-Bessel filters need k + r >= 0")
                out[r] += v * q_bessel_j_array(order, z, spec.deformed)
    return out


def bessel_unitarity_residual(spec: BesselFilterSpec, t_grid) -> float:
    """max_t |M M^* - I| with M[r, j] = (nu+1)^{-1/2} m_r(t e^{i pi j}), literally as displayed."""
    t = np.asarray(t_grid, dtype=np.complex128).ravel()
    j = np.arange(spec.nu + 1)
    pts = t[:, None] * np.exp(1j * math.pi * j)[None, :]
    F = bessel_filters(spec, pts) / math.sqrt(spec.nu + 1)  # (r, G, j)
    M = np.transpose(F, (1, 0, 2))
    prod = np.einsum("gij,gkj->gik", M, M.conj())
    return float(np.max(np.abs(prod - np.eye(spec.nu + 1)[None])))


def _check_spec(spec: BesselFilterSpec, tol: float):
    d = residue_diagonal_residual(spec)
    o = spec_offdiagonal_residual(spec)
    if d > tol or o > tol:
        raise ConstraintError(f"spec violates the constraints: diagonal {d:.3e}, off-diagonal {o:.3e}")


def deformed_bank_from_bessel(spec: BesselFilterSpec, t_grid=None, tol: float = 1e-8) -> FilterBank:
    """Bank with m_r(t q^j) = sum_k b_k J_{k+r}(t q^j; q) on q-radial orbits.

    Unitarity of M(t) is not guaranteed; call :func:`unitarity_residual`.
    """
    if spec.deformed is None:
        raise DomainError("spec has no q")
    _check_spec(spec, tol)
    q = spec.deformed
    t = (np.exp(2j * math.pi * np.arange(16) / 16) if t_grid is None
         else np.asarray(t_grid, dtype=np.complex128).ravel())
    pts = t[:, None] * q ** np.arange(spec.nu + 1, dtype=float)[None, :]
    return FilterBank(spec.nu, "qradial", q, t, bessel_filters(spec, pts))


def _classical_bank(spec: BesselFilterSpec, grid) -> FilterBank:
    pts = grid[:, None] * np.exp(2j * math.pi * np.arange(spec.nu + 1) / (spec.nu + 1))[None, :]
    return FilterBank(spec.nu, "root", None, grid, bessel_filters(spec, pts))


def bessel_system(spec: BesselFilterSpec, k_min: int = -2, k_max: int = 2, A: int = 4,
                  tol: float = 1e-8) -> CuntzSystem:
    """Lattice tower whose banks are the Bessel filters of ``spec``.

    The deformed spec uses q-radial orbits.  The classical spec is evaluated on
    root-of-unity orbits t exp(2 pi i j/N); these agree with t exp(i pi j) for nu = 1.
    """
    _check_spec(spec, tol)
    if spec.deformed is not None:
        return CuntzSystem("qradial", spec.nu, spec.deformed, k_min=k_min, k_max=k_max, A=A,
                           bank_factory=lambda g: deformed_bank_from_bessel(spec, g, tol))
    return CuntzSystem("root", spec.nu, None, k_min=k_min, k_max=k_max, A=A,
                       bank_factory=lambda g: _classical_bank(spec, g))


def frame_family(nu: int, trunc: FrameTruncation) -> list[NAdicWord]:
    """Words (0^m, r) for r >= 1 and m < scales, then 0^scales when scaling is included."""
    N = nu + 1
    words = [NAdicWord((0,) * m + (r,), N) for m in range(trunc.scales) for r in range(1, N)]
    if trunc.include_scaling:
        words.append(NAdicWord((0,) * trunc.scales, N))
    return words


def frame_ratio(f: LatticeFunction, system: CuntzSystem, trunc: FrameTruncation) -> tuple[float, float]:
    """(sum_w ||S_w^* f||^2 / ||f||^2, leakage) for f on level ``trunc.scales``.

    Leakage is the part of ||f||^2 carried by the scaling words when they are
    excluded from the family (0 otherwise).
    """
    if f.level != trunc.scales:
        raise DomainError(f"f must live on level {trunc.scales}")
    nf2 = f.norm() ** 2
    if nf2 == 0:
        raise DomainError("f must be non-zero")
    total = math.fsum(apply_word_star(f, w, system).norm() ** 2 for w in frame_family(system.nu, trunc))
    leak = 0.0
    if not trunc.include_scaling:
        tail = NAdicWord((0,) * trunc.scales, system.N)
        leak = apply_word_star(f, tail, system).norm() ** 2 / nf2
    return total / nf2, leak


def frame_bounds_estimate(spec, test_functions: Sequence[LatticeFunction],
                          truncation: FrameTruncation = FrameTruncation()) -> FrameBounds:
    """A = min and B = max of the frame ratio over the test functions.

    ``spec`` is a :class:`CuntzSystem` or a :class:`BesselFilterSpec` (turned
    into one by :func:`bessel_system`).
    """
    system = spec if isinstance(spec, CuntzSystem) else bessel_system(spec)
    if not test_functions:
        raise DomainError("need at least one test function")
    pairs = [frame_ratio(f, system, truncation) for f in test_functions]
    ratios = tuple(p[0] for p in pairs)
    leak = max(p[1] for p in pairs)
    return FrameBounds(min(ratios), max(ratios), ratios, leak, leak > truncation.leakage_tol)


def scaling_product(m0, t, levels: int, nu: int) -> np.ndarray:
    """Truncated prod_{l=1}^{levels} m_0((nu+1)^{-l} t), a diagnostic only."""
    t = np.asarray(t, dtype=np.complex128)
    out = np.ones_like(t)
    for l in range(1, levels + 1):
        out = out * np.asarray(m0(t / (nu + 1) ** l), dtype=np.complex128)
    return out

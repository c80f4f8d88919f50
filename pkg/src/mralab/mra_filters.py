"""Low-pass filters, orbit normalization and unitary completion to a filter bank.

Three normalization variants share one code path:

========  ==========================  ================================
variant   orbit of a base point t      weights rho_r, normalizer
========  ==========================  ================================
root      t exp(2 pi i r / N)          1, c = nu/(nu+2)
qroot     t exp(2 pi i r / N)          1, c_q = (1-q^nu)/(1-q^(nu+2))
qradial   t q^r                        q^(-2r), d_q = 1/(1-q^(2(nu+1)))
========  ==========================  ================================

with N = nu + 1.  A bank is stored by its samples on the orbits, and the
matrix M(t) has entries ``sqrt(scale * rho_r) * m_i(orbit_r(t))``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, GridError, NormalizationError
from .q_calculus import QParam
from .special_functions import jv_kernel

__all__ = [
    "VARIANTS",
    "SectorStep",
    "FilterCoeffs",
    "NormalizationConstant",
    "FilterBank",
    "normalization_constant",
    "branch_weights",
    "orbit_scale",
    "default_grid",
    "orbit_points",
    "build_m0",
    "real_line_m0_identity",
    "haar_xnu_inner",
    "sector_inner",
    "sector_inner_quadrature",
    "orbit_normalization_residual",
    "complete_filter_bank",
    "matrix_M",
    "unitarity_residual",
    "normalize_on_orbits",
    "constant_m0",
]

VARIANTS = ("root", "qroot", "qradial")
_ALIASES = {"c": "root", "c_q": "qroot", "d_q": "qradial"}


def _variant(name: str) -> str:
    v = _ALIASES.get(name, name)
    if v not in VARIANTS:
        raise DomainError(f"unknown variant {name!r}; expected one of {VARIANTS}")
    return v


def _check_nu(nu) -> int:
    if int(nu) != nu or nu < 1:
        raise DomainError("nu must be an integer >= 1 (c vanishes at nu = 0)")
    return int(nu)


def _check_q(variant, q):
    if variant == "root":
        return None
    if q is None:
        raise DomainError(f"variant {variant!r} needs q")
    return QParam(q).q


@dataclass(frozen=True)
class SectorStep:
    """Indicator of the sector 0 <= Arg z <= 2 pi/m, |z| <= 1, shifted by k and rotated by N."""

    m: int
    k: int = 0
    N: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("m must be >= 1")
        if not (self.N == 0 or 1 <= self.N <= self.m):
            raise DomainError("rotation N must be 0 or in [1, m]")

    @property
    def alpha(self) -> float:
        return 2.0 * math.pi / self.m

    def radial_support(self) -> tuple[float, float]:
        # |z| + k in [0, 1]
        return max(0.0, -self.k), 1.0 - self.k

    def angular_support(self) -> tuple[float, float]:
        # Arg z + N alpha in [0, alpha] mod 2 pi
        lo = (-self.N * self.alpha) % (2.0 * math.pi)
        return lo, lo + self.alpha


@dataclass(frozen=True)
class FilterCoeffs:
    """Finitely supported b_k (mapping k -> b_k) and the order nu."""

    b: Mapping[int, complex]
    nu: int

    def __post_init__(self):
        _check_nu(self.nu)
        object.__setattr__(self, "b", {int(k): complex(v) for k, v in dict(self.b).items()})


@dataclass(frozen=True)
class NormalizationConstant:
    variant: str
    value: float


def normalization_constant(variant: str, nu: int, q=None) -> NormalizationConstant:
    variant = _variant(variant)
    nu = _check_nu(nu)
    q = _check_q(variant, q)
    if variant == "root":
        val = nu / (nu + 2.0)
    elif variant == "qroot":
        val = (1.0 - q**nu) / (1.0 - q ** (nu + 2))
    else:
        val = 1.0 / (1.0 - q ** (2 * (nu + 1)))
    return NormalizationConstant(variant, val)


def branch_weights(variant: str, nu: int, q=None) -> np.ndarray:
    """rho_r: all ones on root-of-unity orbits, q^(-2r) on q-radial ones."""
    variant = _variant(variant)
    nu = _check_nu(nu)
    q = _check_q(variant, q)
    if variant == "qradial":
        return q ** (-2.0 * np.arange(nu + 1))
    return np.ones(nu + 1)


def orbit_scale(variant: str, nu: int, q=None) -> float:
    """Scalar s with sum_r s rho_r |m_0(orbit_r)|^2 = 1 as the normalization identity.

    For root and qroot this is 1/(norm (nu+1)).  For qradial it is 1/d_q: the
    identity sum_r q^(-2r)|m_0(t q^r)|^2 = d_q fixes it, so the extra 1/(nu+1)
    in the printed matrix prefactor is not applied.
    """
    variant = _variant(variant)
    norm = normalization_constant(variant, nu, q).value
    if variant == "qradial":
        return 1.0 / norm
    return 1.0 / (norm * (nu + 1))


def default_grid(variant: str, nu: int, size: int = 64) -> np.ndarray:
    """Base points t whose orbits are pairwise disjoint.

    Root-of-unity orbits need t in the fundamental sector [0, 2 pi/N); q-radial
    orbits use the whole unit circle.
    """
    variant = _variant(variant)
    nu = _check_nu(nu)
    span = 2.0 * math.pi / (nu + 1) if variant != "qradial" else 2.0 * math.pi
    theta = span * (np.arange(size) + 0.5) / size
    return np.exp(1j * theta)


def orbit_points(variant: str, nu: int, t_grid, q=None) -> np.ndarray:
    """(G, N) array of orbit points sigma_r(t) for each base point t."""
    variant = _variant(variant)
    nu = _check_nu(nu)
    q = _check_q(variant, q)
    t = np.asarray(t_grid, dtype=np.complex128).ravel()
    r = np.arange(nu + 1)
    if variant == "qradial":
        return t[:, None] * (q ** r.astype(float))[None, :]
    return t[:, None] * np.exp(2j * math.pi * r / (nu + 1))[None, :]


# -- m_0 from coefficients -------------------------------------------------------


def build_m0(coeffs: FilterCoeffs, t_grid, K: int = 40, second_exponent: str = "nu+1") -> np.ndarray:
    """m_0(t) = sum_k b_k [(k+1)^(nu+1) sum_{|h|<=K} J_h(tk) J_{nu+1-h}(t) - k^e J_{nu+1}(kt)].

    The default e = nu + 1 is what the Hankel transform of the Haar steps
    x^nu 1_[k, k+1] produces.  ``second_exponent="nu"`` gives the other
    printed form, e = nu.
    """
    if K < 1:
        raise DomainError("K must be >= 1")
    if second_exponent not in ("nu", "nu+1"):
        raise DomainError("second_exponent must be 'nu' or 'nu+1'")
    nu = coeffs.nu
    t = np.asarray(t_grid, dtype=np.complex128)
    shape = t.shape
    t = t.ravel()
    e = nu if second_exponent == "nu" else nu + 1
    hs = np.arange(-K, K + 1)
    # J_{nu+1-h}(t) does not depend on k
    jt = np.stack([jv_kernel(nu + 1 - h, t) for h in hs])
    out = np.zeros(t.shape, dtype=np.complex128)
    for k, bk in sorted(coeffs.b.items()):
        if bk == 0:
            continue
        jk = np.stack([jv_kernel(h, k * t) for h in hs])
        inner = np.sum(jk * jt, axis=0)
        second = float(k) ** e * jv_kernel(nu + 1, k * t) if k != 0 else 0.0
        out += bk * ((k + 1.0) ** (nu + 1) * inner - second)
    return out.reshape(shape)


def real_line_m0_identity(coeffs, t_grid, nu: int | None = None, j_window: int = 2000,
                          K: int = 40) -> float:
    """max_t |sum_j |m_0(t+j)|^2 (t+j)^-2 - 1/(2(nu+1))| over a finite j window.

    ``coeffs`` is a :class:`FilterCoeffs` or a vectorised callable m_0 (then
    ``nu`` is required).  The term t + j = 0 is skipped.
    """
    if isinstance(coeffs, FilterCoeffs):
        nu = coeffs.nu
        m0 = lambda s: build_m0(coeffs, s, K)  # noqa: E731
    else:
        if nu is None:
            raise DomainError("nu is required with a callable m_0")
        m0 = coeffs
    nu = _check_nu(nu)
    t = np.asarray(t_grid, dtype=float).ravel()
    js = np.arange(-j_window, j_window + 1)
    pts = t[:, None] + js[None, :]
    vals = np.asarray(m0(pts.ravel()), dtype=np.complex128).reshape(pts.shape)
    safe = np.where(pts == 0, 1.0, pts)
    terms = np.where(pts == 0, 0.0, np.abs(vals) ** 2 / safe**2)
    sums = np.sort(terms, axis=1).sum(axis=1)
    return float(np.max(np.abs(sums - 1.0 / (2 * (nu + 1)))))


def haar_xnu_inner(k: int, nu: int, order: int = 32) -> float:
    """int_0^inf phi^(k)(x) phi^(0)(x) x dx with phi^(k)(x) = x^nu 1_(k, k+1](x)."""
    lo, hi = max(0.0, float(k)), min(1.0, float(k) + 1.0)
    if hi <= lo:
        return 0.0
    xg, wg = leggauss(order)
    x = 0.5 * (hi - lo) * (xg + 1.0) + lo
    w = 0.5 * (hi - lo) * wg
    return float(np.sum(w * x ** (2 * nu + 1)))


# -- sector inner products -------------------------------------------------------


def sector_inner(k: int, N: int, nu: int, m: int, deformed=None) -> complex:
    """Closed form of <phi^(k,N) | phi^(0,0)> with the polar measure r^(nu+1) e^(i(nu+1)theta).

    A rotation by N = m is a full turn and is treated as N = 0.  With ``deformed``
    set to q the radial integral is the Jackson one, giving (1-q)/(1-q^(nu+2)).
    """
    SectorStep(m, k, N)
    if k != 0 or N % m != 0:
        return 0j
    alpha = 2.0 * math.pi / m
    phase = (cmath.exp(1j * alpha * (nu + 1)) - 1.0) / (1j * (nu + 1))
    if deformed is None:
        radial = 1.0 / (nu + 2)
    else:
        q = QParam(deformed).q
        radial = (1.0 - q) / (1.0 - q ** (nu + 2))
    return radial * phase


def _overlap(a, b):
    return max(a[0], b[0]), min(a[1], b[1])


def sector_inner_quadrature(k: int, N: int, nu: int, m: int, order: int = 24) -> complex:
    """Gauss-Legendre evaluation of the same integral over the intersected supports."""
    s, base = SectorStep(m, k, N), SectorStep(m)
    r_lo, r_hi = _overlap(s.radial_support(), base.radial_support())
    if r_hi <= r_lo:
        return 0j
    a0 = base.angular_support()
    total = 0j
    xg, wg = leggauss(order)
    lo, hi = s.angular_support()
    for shift in (-2.0 * math.pi, 0.0, 2.0 * math.pi):
        t_lo, t_hi = _overlap((lo + shift, hi + shift), a0)
        if t_hi <= t_lo:
            continue
        r = 0.5 * (r_hi - r_lo) * (xg + 1.0) + r_lo
        wr = 0.5 * (r_hi - r_lo) * wg
        th = 0.5 * (t_hi - t_lo) * (xg + 1.0) + t_lo
        wt = 0.5 * (t_hi - t_lo) * wg
        total += np.sum(wr * r ** (nu + 1)) * np.sum(wt * np.exp(1j * (nu + 1) * th))
    return complex(total)


# -- normalization and completion ------------------------------------------------


def _orbit_values(m0, variant, nu, t_grid, q):
    if callable(m0):
        pts = orbit_points(variant, nu, t_grid, q)
        return np.asarray(m0(pts), dtype=np.complex128).reshape(pts.shape)
    vals = np.asarray(m0, dtype=np.complex128)
    G = np.asarray(t_grid).size
    if vals.shape != (G, nu + 1):
        raise GridError(f"m0 samples must have shape {(G, nu + 1)}, got {vals.shape}")
    return vals


def orbit_normalization_residual(m0, variant: str, t_grid, nu: int, q=None) -> float:
    """max over base points of |scale * sum_r rho_r |m_0(orbit_r)|^2 - 1|.

    ``m0`` is a vectorised callable or an array of orbit samples of shape (G, nu+1).
    """
    variant = _variant(variant)
    nu = _check_nu(nu)
    vals = _orbit_values(m0, variant, nu, t_grid, q)
    w = orbit_scale(variant, nu, q) * branch_weights(variant, nu, q)
    return float(np.max(np.abs(np.sum(w * np.abs(vals) ** 2, axis=1) - 1.0)))


def normalize_on_orbits(m0, variant: str, t_grid, nu: int, q=None) -> np.ndarray:
    """Rescale orbit samples of a raw profile so the normalization identity holds."""
    variant = _variant(variant)
    nu = _check_nu(nu)
    vals = _orbit_values(m0, variant, nu, t_grid, q)
    w = orbit_scale(variant, nu, q) * branch_weights(variant, nu, q)
    s = np.sqrt(np.sum(w * np.abs(vals) ** 2, axis=1))
    if np.any(s == 0):
        raise NormalizationError("profile vanishes on a whole orbit")
    return vals / s[:, None]


def _householder_completion(u: np.ndarray) -> np.ndarray:
    """Unitary matrix with first row u (|u| = 1); rows 1.. come from a reflection.

    With y = exp(-i arg conj(u_0)) conj(u) the reflection P = I - 2 v v*/(v* v),
    v = e_0 - y, maps e_0 to y and has first row exp(i phi) u.  The phase is
    chosen so y_0 >= 0, which also covers rows proportional to -e_0.
    """
    n = u.size
    x = np.conj(u)
    phi = cmath.phase(x[0]) if x[0] != 0 else 0.0
    y = cmath.exp(-1j * phi) * x
    v = -y
    v[0] += 1.0
    vv = float(np.vdot(v, v).real)
    if vv < 1e-30:
        P = np.eye(n, dtype=np.complex128)
    else:
        P = np.eye(n, dtype=np.complex128) - (2.0 / vv) * np.outer(v, np.conj(v))
    U = P.copy()
    U[0] = u
    return U


@dataclass(frozen=True)
class FilterBank:
    """Filters m_0..m_nu sampled on the orbits of a base grid.

    ``filters[i, g, r]`` is m_i at ``orbit[g, r]``.
    """

    nu: int
    variant: str
    q: float | None
    grid: np.ndarray
    filters: np.ndarray
    rho: np.ndarray = field(default=None)

    def __post_init__(self):
        variant = _variant(self.variant)
        nu = _check_nu(self.nu)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "q", _check_q(variant, self.q))
        grid = np.array(self.grid, dtype=np.complex128).ravel()
        filters = np.array(self.filters, dtype=np.complex128)
        if filters.shape != (nu + 1, grid.size, nu + 1):
            raise GridError(f"filters must have shape {(nu + 1, grid.size, nu + 1)}")
        rho = branch_weights(variant, nu, self.q) if self.rho is None else np.array(self.rho, float)
        for arr in (grid, filters, rho):
            arr.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "filters", filters)
        object.__setattr__(self, "rho", rho)

    @property
    def N(self) -> int:
        return self.nu + 1

    @property
    def norm(self) -> float:
        return normalization_constant(self.variant, self.nu, self.q).value

    @property
    def scale(self) -> float:
        return orbit_scale(self.variant, self.nu, self.q)

    @property
    def orbit(self) -> np.ndarray:
        return orbit_points(self.variant, self.nu, self.grid, self.q)

    def matrices(self) -> np.ndarray:
        """All M(t) stacked as (G, N, N)."""
        amp = np.sqrt(self.scale * self.rho)
        return np.transpose(self.filters, (1, 0, 2)) * amp[None, None, :]

    def to_json(self) -> str:
        doc = {
            "nu": self.nu,
            "variant": self.variant,
            "q": self.q,
            "grid": [[z.real, z.imag] for z in self.grid.tolist()],
            "filters": [[[z.real, z.imag] for z in row.tolist()]
                        for row in self.filters.reshape(self.N, -1)],
            "rho": self.rho.tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "FilterBank":
        doc = json.loads(text)
        nu = doc["nu"]
        grid = np.array([complex(a, b) for a, b in doc["grid"]])
        flat = np.array([[complex(a, b) for a, b in row] for row in doc["filters"]])
        filters = flat.reshape(nu + 1, grid.size, nu + 1)
        return cls(nu, doc["variant"], doc.get("q"), grid, filters, np.array(doc["rho"]))


def complete_filter_bank(m0_row, variant: str, t_grid=None, nu: int | None = None, q=None,
                         tol: float = 1e-10) -> FilterBank:
    """Complete m_0 to nu+1 filters with M(t) unitary at every base point.

    ``m0_row`` holds m_0 on the orbits, shape (G, nu+1), or is a vectorised
    callable (then ``nu`` is required).  The default grid is :func:`default_grid`.
    """
    variant = _variant(variant)
    if nu is None:
        if callable(m0_row):
            raise DomainError("nu is required with a callable m0")
        nu = np.asarray(m0_row).shape[1] - 1
    nu = _check_nu(nu)
    q = _check_q(variant, q)
    t_grid = default_grid(variant, nu) if t_grid is None else np.asarray(t_grid, np.complex128).ravel()
    vals = _orbit_values(m0_row, variant, nu, t_grid, q)
    amp = np.sqrt(orbit_scale(variant, nu, q) * branch_weights(variant, nu, q))
    rows = vals * amp[None, :]
    dev = np.abs(np.linalg.norm(rows, axis=1) - 1.0)
    worst = int(np.argmax(dev))
    if dev[worst] > tol:
        raise NormalizationError(
            f"m0 row not normalized at grid point {worst} (t={t_grid[worst]}): deviation {dev[worst]:.3e}"
        )
    filters = np.empty((nu + 1, t_grid.size, nu + 1), dtype=np.complex128)
    for g in range(t_grid.size):
        U = _householder_completion(rows[g] / np.linalg.norm(rows[g]))
        U[0] = rows[g]
        filters[:, g, :] = U / amp[None, :]
    return FilterBank(nu, variant, q, t_grid, filters)


def _grid_index(bank: FilterBank, t) -> int:
    if isinstance(t, (int, np.integer)):
        if not 0 <= t < bank.grid.size:
            raise GridError(f"grid index {t} out of range")
        return int(t)
    d = np.abs(bank.grid - complex(t))
    g = int(np.argmin(d))
    if d[g] > 1e-12 * max(1.0, abs(complex(t))):
        raise GridError(f"t={t} is not a grid point of the bank")
    return g


def matrix_M(bank: FilterBank, t) -> np.ndarray:
    """M(t)[i, r] = sqrt(scale rho_r) m_i(sigma_r(t)); t is a grid point or its index."""
    g = _grid_index(bank, t)
    amp = np.sqrt(bank.scale * bank.rho)
    return bank.filters[:, g, :] * amp[None, :]


def unitarity_residual(bank: FilterBank, t=None) -> float:
    """max |M M* - I| at one grid point, or over the whole grid when t is None."""
    if t is not None:
        M = matrix_M(bank, t)
        return float(np.max(np.abs(M @ M.conj().T - np.eye(bank.N))))
    Ms = bank.matrices()
    prod = np.einsum("gij,gkj->gik", Ms, Ms.conj())
    return float(np.max(np.abs(prod - np.eye(bank.N)[None])))


def constant_m0(variant: str, nu: int, q=None) -> Callable:
    """The constant-profile solution of the normalization identity on every orbit.

    On q-radial orbits the profile is m_0(t q^r) proportional to q^r, which
    makes every orbit term equal.
    """
    variant = _variant(variant)
    nu = _check_nu(nu)
    q = _check_q(variant, q)
    s = orbit_scale(variant, nu, q)
    if variant == "qradial":
        base = 1.0 / math.sqrt(s * (nu + 1))

        def m0(z):
            z = np.asarray(z, dtype=np.complex128)
            # radial level r from |z| = q^r on unit-circle grids
            r = np.rint(np.log(np.abs(z)) / math.log(q))
            return base * q**r + 0j * z

        return m0
    c = 1.0 / math.sqrt(s * (nu + 1))
    return lambda z: np.full(np.shape(z), c, dtype=np.complex128)

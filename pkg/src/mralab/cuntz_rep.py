"""Cuntz isometries S_k on lattice functions, the N-adic projection-valued measure
and the cyclic-group Fourier pair.

Lattice model
-------------
A level-l grid carries points z = R^(k s) exp(2 pi i j / A) with R = q (or a
classical radial base), k in [k_min, k_max], j in [0, A) and radial step s.
The branch maps send level l into level l+1 and partition it:

* root-of-unity variants (``root``, ``qroot``): sigma_r(k, j) = (k, j + r A) on a
  grid with A' = N A and s' = s / N, i.e. sigma_r(z) = sigma_0(z) exp(2 pi i r/N)
  with sigma_0 the principal N-th root;
* q-radial variant (``qradial``): sigma_r(k, j) = (N k + r, j), so
  sigma_r(z) = sigma_0(z) q^r on the same lattice {q^k}.

The map z -> z^N of the representation is the inverse index map.  Level l+1
carries the measure mu'(sigma_r x) = w_r mu(x) with w_r = scale * rho_r, which
makes the Cuntz relations hold exactly for every bank whose M(t) is unitary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DomainError, GridError, NormalizationError
from .mra_filters import (
    FilterBank,
    _variant,
    branch_weights,
    complete_filter_bank,
    normalize_on_orbits,
    orbit_scale,
)
from .q_calculus import QParam

__all__ = [
    "LatticeFunction",
    "BranchMaps",
    "NAdicWord",
    "CuntzSystem",
    "base_grid",
    "default_profile",
    "apply_S",
    "apply_S_star",
    "apply_word_star",
    "operator_matrices",
    "cuntz_residuals",
    "dense_cuntz_residuals",
    "pvm_measure",
    "partition_interval",
    "all_words",
    "cyclic_fourier",
    "cyclic_fourier_inverse",
]


@dataclass(frozen=True)
class LatticeFunction:
    """Complex values on a radial-by-angular grid with a positive point measure.

    ``values`` and ``weights`` have shape (k_max - k_min + 1, A).  Exactly one of
    ``q`` (q-lattice) and ``base`` (classical geometric radial grid) is set.
    """

    k_min: int
    k_max: int
    A: int
    values: np.ndarray
    weights: np.ndarray = field(default=None)
    q: float | None = None
    base: float | None = None
    radial_step: float = 1.0
    level: int = 0

    def __post_init__(self):
        if self.k_max < self.k_min or self.A < 1:
            raise GridError("empty lattice")
        if (self.q is None) == (self.base is None):
            raise GridError("exactly one of q and base must be given")
        if self.q is not None:
            object.__setattr__(self, "q", QParam(self.q).q)
        elif not self.base > 0:
            raise GridError("classical radial base must be positive")
        shape = (self.k_max - self.k_min + 1, self.A)
        vals = np.array(self.values, dtype=np.complex128)
        if vals.shape != shape:
            raise GridError(f"values must have shape {shape}, got {vals.shape}")
        w = np.ones(shape) if self.weights is None else np.array(self.weights, dtype=float)
        if w.shape != shape or np.any(w <= 0):
            raise GridError("weights must be positive with the values' shape")
        vals.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "weights", w)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def points(self) -> np.ndarray:
        R = self.q if self.q is not None else self.base
        radius = R ** (self.ks * self.radial_step)
        return radius[:, None] * np.exp(2j * math.pi * np.arange(self.A) / self.A)[None, :]

    def with_values(self, values) -> "LatticeFunction":
        return LatticeFunction(self.k_min, self.k_max, self.A, values, self.weights,
                               self.q, self.base, self.radial_step, self.level)

    def inner(self, other: "LatticeFunction") -> complex:
        return complex(np.sum(self.weights * np.conj(self.values) * other.values))

    def norm(self) -> float:
        return math.sqrt(float(np.sum(self.weights * np.abs(self.values) ** 2)))

    def to_json(self) -> str:
        doc = {}
        if self.q is not None:
            doc["q"] = self.q
        else:
            doc["base"] = self.base
        doc.update(
            k_min=self.k_min, k_max=self.k_max, A=self.A,
            values=[[z.real, z.imag] for z in self.values.ravel().tolist()],
            weights=self.weights.ravel().tolist(),
            radial_step=self.radial_step, level=self.level,
        )
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "LatticeFunction":
        d = json.loads(text)
        shape = (d["k_max"] - d["k_min"] + 1, d["A"])
        vals = np.array([complex(a, b) for a, b in d["values"]]).reshape(shape)
        w = np.array(d["weights"]).reshape(shape) if "weights" in d else None
        return cls(d["k_min"], d["k_max"], d["A"], vals, w, d.get("q"), d.get("base"),
                   d.get("radial_step", 1.0), d.get("level", 0))


@dataclass(frozen=True)
class BranchMaps:
    """Index arithmetic of sigma_0..sigma_nu between consecutive levels."""

    variant: str
    nu: int
    q: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", _variant(self.variant))

    @property
    def N(self) -> int:
        return self.nu + 1

    @property
    def angular(self) -> bool:
        return self.variant != "qradial"

    def child_shape(self, k_min, k_max, A, radial_step):
        """(k_min, k_max, A, radial_step) of the next level."""
        N = self.N
        if self.angular:
            return k_min, k_max, N * A, radial_step / N
        return N * k_min, N * k_max + N - 1, A, radial_step

    def sigma(self, r: int, k: int, j: int, A: int) -> tuple[int, int]:
        """Child index of (k, j) under sigma_r, on a level with angular size A."""
        if not 0 <= r < self.N:
            raise DomainError("branch index out of range")
        if self.angular:
            return k, j + r * A
        return self.N * k + r, j

    def power(self, k: int, j: int, A_child: int) -> tuple[int, int]:
        """Parent index of a child point: the map z -> z^N on the lattice."""
        if self.angular:
            return k, j % (A_child // self.N)
        return k // self.N, j

    # reshaping between the child layout and the (parent, branch) layout
    def to_branches(self, fine: np.ndarray, K: int, A: int) -> np.ndarray:
        """(..., K', A') child array -> (..., K, A, N) indexed by (parent, r)."""
        N = self.N
        lead = fine.shape[:-2]
        if self.angular:
            return np.moveaxis(fine.reshape(*lead, K, N, A), -2, -1)
        return fine.reshape(*lead, K, N, A).swapaxes(-1, -2)

    def from_branches(self, byb: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`to_branches`."""
        *lead, K, A, N = byb.shape
        if self.angular:
            return np.moveaxis(byb, -1, -2).reshape(*lead, K, N * A)
        return byb.swapaxes(-1, -2).reshape(*lead, K * N, A)


def base_grid(variant: str, nu: int, A: int) -> np.ndarray:
    """Bank grid matching a level with angular size A.

    Root-of-unity banks use the fundamental-sector angles 2 pi j/(N A); q-radial
    banks use the level's own angles 2 pi j/A.
    """
    variant = _variant(variant)
    j = np.arange(A)
    if variant == "qradial":
        return np.exp(2j * math.pi * j / A)
    return np.exp(2j * math.pi * j / ((nu + 1) * A))


def default_profile(z):
    """A smooth raw low-pass profile used when no m_0 is supplied."""
    z = np.asarray(z, dtype=np.complex128)
    return 1.0 + 0.5 * z + 0.25 * np.conj(z) ** 2


class CuntzSystem:
    """Banks for every level of the tower, completed from one m_0 profile.

    ``profile`` is a vectorised raw m_0, rescaled on each orbit to satisfy the
    normalization identity before completion.  ``bank_factory(grid)`` replaces
    that construction when given, e.g. for banks that are not unitary.
    """

    def __init__(self, variant: str, nu: int, q=None, profile: Callable | None = None,
                 k_min: int = -3, k_max: int = 3, A: int = 4, base: float = 0.5,
                 bank_factory: Callable[[np.ndarray], FilterBank] | None = None):
        self.maps = BranchMaps(variant, nu, q)
        self.variant = self.maps.variant
        self.nu = int(nu)
        self.q = None if q is None else QParam(q).q
        if self.variant != "root" and self.q is None:
            raise DomainError(f"variant {self.variant!r} needs q")
        self.profile = profile or default_profile
        self.k_min, self.k_max, self.A = int(k_min), int(k_max), int(A)
        self.base = base
        self.bank_factory = bank_factory
        self._banks: dict[int, FilterBank] = {}

    @property
    def N(self) -> int:
        return self.nu + 1

    def geometry(self, level: int):
        k_min, k_max, A, step = self.k_min, self.k_max, self.A, 1.0
        for _ in range(level):
            k_min, k_max, A, step = self.maps.child_shape(k_min, k_max, A, step)
        return k_min, k_max, A, step

    def weights(self, level: int) -> np.ndarray:
        k_min, k_max, A, step = self.geometry(0)
        R = self.q if self.q is not None else self.base
        ks = np.arange(k_min, k_max + 1)
        # Jackson-type radial weight on level 0, uniform in angle
        w = np.repeat(((1.0 - R) * R ** (ks * (self.nu + 2)))[:, None], A, axis=1) * (2 * math.pi / A)
        wr = orbit_scale(self.variant, self.nu, self.q) * branch_weights(self.variant, self.nu, self.q)
        for _ in range(level):
            w = self.maps.from_branches(w[..., None] * wr)
        return w

    def zeros(self, level: int = 0) -> LatticeFunction:
        k_min, k_max, A, step = self.geometry(level)
        shape = (k_max - k_min + 1, A)
        return self._make(level, np.zeros(shape, dtype=np.complex128))

    def _make(self, level, values):
        k_min, k_max, A, step = self.geometry(level)
        if self.q is not None:
            return LatticeFunction(k_min, k_max, A, values, self.weights(level), q=self.q,
                                   radial_step=step, level=level)
        return LatticeFunction(k_min, k_max, A, values, self.weights(level), base=self.base,
                               radial_step=step, level=level)

    def function(self, values, level: int = 0) -> LatticeFunction:
        return self._make(level, values)

    def random(self, rng: np.random.Generator, level: int = 0, normalized: bool = True) -> LatticeFunction:
        f = self.zeros(level)
        v = rng.standard_normal(f.shape) + 1j * rng.standard_normal(f.shape)
        f = f.with_values(v)
        return f.with_values(v / f.norm()) if normalized else f

    def bank(self, level: int) -> FilterBank:
        if level not in self._banks:
            A = self.geometry(level)[2]
            grid = base_grid(self.variant, self.nu, A)
            if self.bank_factory is not None:
                self._banks[level] = self.bank_factory(grid)
                return self._banks[level]
            m0 = normalize_on_orbits(self.profile, self.variant, grid, self.nu, self.q)
            self._banks[level] = complete_filter_bank(m0, self.variant, grid, self.nu, self.q)
        return self._banks[level]


def _resolve(bank, xi: LatticeFunction) -> tuple[FilterBank, BranchMaps]:
    if isinstance(bank, CuntzSystem):
        return bank.bank(xi.level), bank.maps
    if not isinstance(bank, FilterBank):
        raise TypeError("bank must be a FilterBank or CuntzSystem")
    return bank, BranchMaps(bank.variant, bank.nu, bank.q)


def _bank_for_level(bank: FilterBank, maps: BranchMaps, A: int) -> np.ndarray:
    """Filters as (N, A, N): m_i(sigma_r x) for parent angular index j, radius-independent."""
    expected = base_grid(bank.variant, bank.nu, A)
    if bank.grid.size != A or np.max(np.abs(bank.grid - expected)) > 1e-12:
        raise GridError(
            f"bank grid ({bank.grid.size} points) is not the base grid of a level with A={A}"
        )
    return bank.filters


def _weights_r(bank: FilterBank) -> np.ndarray:
    return bank.scale * bank.rho


def _check_letter(k, bank):
    if not 0 <= k < bank.N:
        raise DomainError(f"letter {k} not in 0..{bank.N - 1}")


def _apply_S_values(k, vals, bank, maps, K, A):
    F = _bank_for_level(bank, maps, A)  # (N, A, N)
    byb = vals[..., :, :, None] * F[k][None, :, :]
    return maps.from_branches(byb)


def _apply_S_star_values(k, vals, bank, maps, K, A):
    F = _bank_for_level(bank, maps, A)
    byb = maps.to_branches(vals, K, A)
    return np.sum(byb * (np.conj(F[k]) * _weights_r(bank))[None, :, :], axis=-1)


def apply_S(k: int, xi: LatticeFunction, bank) -> LatticeFunction:
    """(S_k xi)(z) = m_k(z) xi(z^N): maps a level-l function to level l+1."""
    fb, maps = _resolve(bank, xi)
    _check_letter(k, fb)
    K, A = xi.shape
    vals = _apply_S_values(k, xi.values, fb, maps, K, A)
    k_min, k_max, A2, step = maps.child_shape(xi.k_min, xi.k_max, A, xi.radial_step)
    w = maps.from_branches(xi.weights[..., None] * _weights_r(fb))
    return LatticeFunction(k_min, k_max, A2, vals, w, xi.q, xi.base, step, xi.level + 1)


def apply_S_star(k: int, xi: LatticeFunction, bank) -> LatticeFunction:
    """(S_k^* xi)(z) = sum_r w_r conj(m_k(sigma_r z)) xi(sigma_r z): level l+1 to level l.

    For a :class:`FilterBank` the bank must belong to the parent level; for a
    :class:`CuntzSystem` it is looked up from ``xi.level - 1``.
    """
    if xi.level < 1:
        raise GridError("S^* needs a function on level >= 1")
    maps = _maps_of(bank)
    if isinstance(bank, CuntzSystem):
        fb = bank.bank(xi.level - 1)
    else:
        fb = bank
    _check_letter(k, fb)
    N = maps.N
    if maps.angular:
        k_min, k_max, A, step = xi.k_min, xi.k_max, xi.A // N, xi.radial_step * N
        if xi.A % N:
            raise GridError("angular size not divisible by N")
    else:
        if xi.k_min % N or (xi.k_max + 1) % N:
            raise GridError("radial window is not a union of branch blocks")
        k_min, k_max, A, step = xi.k_min // N, (xi.k_max + 1) // N - 1, xi.A, xi.radial_step
    K = k_max - k_min + 1
    vals = _apply_S_star_values(k, xi.values, fb, maps, K, A)
    w = maps.to_branches(xi.weights, K, A)[..., 0] / _weights_r(fb)[0]
    return LatticeFunction(k_min, k_max, A, vals, w, xi.q, xi.base, step, xi.level - 1)


def _maps_of(bank) -> BranchMaps:
    if isinstance(bank, CuntzSystem):
        return bank.maps
    return BranchMaps(bank.variant, bank.nu, bank.q)


def operator_matrices(system: CuntzSystem, level: int = 0):
    """Dense S_k (child x parent) and S_k^* (parent x child) matrices on one level."""
    k_min, k_max, A, _ = system.geometry(level)
    K = k_max - k_min + 1
    n = K * A
    fb, maps = system.bank(level), system.maps
    eye = np.eye(n, dtype=np.complex128).reshape(n, K, A)
    S = [(_apply_S_values(k, eye, fb, maps, K, A).reshape(n, -1)).T for k in range(system.N)]
    kc0, kc1, Ac, _ = system.geometry(level + 1)
    m = (kc1 - kc0 + 1) * Ac
    eye_c = np.eye(m, dtype=np.complex128).reshape(m, kc1 - kc0 + 1, Ac)
    Sst = [(_apply_S_star_values(k, eye_c, fb, maps, K, A).reshape(m, -1)).T for k in range(system.N)]
    return S, Sst


def cuntz_residuals(bank, grid: CuntzSystem | None = None, n_random: int = 20,
                    seed: int = 0, level: int = 0) -> dict:
    """Pointwise-defect surrogates of ||S_i^* S_j - delta_ij I|| and ||sum S_k S_k^* - I||.

    The defect is the largest entry of (X - I) v over the indicator basis and
    ``n_random`` random unit vectors.  ``bank`` is a :class:`CuntzSystem`, or a
    :class:`FilterBank` used on the single level described by ``grid``.
    """
    if isinstance(bank, CuntzSystem):
        system, fb0, fb1 = bank, bank.bank(level), None
    else:
        if grid is None:
            raise DomainError("a FilterBank needs a CuntzSystem describing the grid")
        system, fb0 = grid, bank
    maps = system.maps
    rng = np.random.default_rng(seed)
    k_min, k_max, A, _ = system.geometry(level)
    K = k_max - k_min + 1
    n = K * A
    probes = np.concatenate([np.eye(n), _random_unit(rng, n_random, n)]).reshape(-1, K, A)
    N = system.N
    iso = 0.0
    images = [_apply_S_values(j, probes, fb0, maps, K, A) for j in range(N)]
    for i in range(N):
        for j in range(N):
            back = _apply_S_star_values(i, images[j], fb0, maps, K, A)
            target = probes if i == j else 0.0
            iso = max(iso, float(np.max(np.abs(back - target))))
    # completeness acts on the child level, using the same bank for S and S^*
    kc0, kc1, Ac, _ = maps.child_shape(k_min, k_max, A, 1.0)
    m = (kc1 - kc0 + 1) * Ac
    probes_c = np.concatenate([np.eye(m), _random_unit(rng, n_random, m)]).reshape(-1, kc1 - kc0 + 1, Ac)
    total = np.zeros_like(probes_c)
    for k in range(N):
        down = _apply_S_star_values(k, probes_c, fb0, maps, K, A)
        total += _apply_S_values(k, down, fb0, maps, K, A)
    comp = float(np.max(np.abs(total - probes_c)))
    return {"isometry": iso, "completeness": comp, "leakage": 0.0}


def _random_unit(rng, count, n):
    v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def dense_cuntz_residuals(system: CuntzSystem, level: int = 0) -> dict:
    """Spectral-norm residuals from explicit matrices, in the weighted inner products.

    Also returns how far the implemented S^* is from the Hilbert-space adjoint
    D_parent^{-1} S^H D_child of S.
    """
    S, Sst = operator_matrices(system, level)
    dp = system.weights(level).ravel()
    dc = system.weights(level + 1).ravel()
    N = system.N
    n, m = dp.size, dc.size
    sp, sc = np.sqrt(dp), np.sqrt(dc)
    iso = 0.0
    adj = 0.0
    for i in range(N):
        true_adj = (S[i].conj().T * dc[None, :]) / dp[:, None]
        adj = max(adj, float(np.max(np.abs(true_adj - Sst[i]))))
        for j in range(N):
            X = Sst[i] @ S[j] - (np.eye(n) if i == j else 0.0)
            iso = max(iso, float(np.linalg.norm(sp[:, None] * X / sp[None, :], 2)))
    P = sum(S[k] @ Sst[k] for k in range(N)) - np.eye(m)
    comp = float(np.linalg.norm(sc[:, None] * P / sc[None, :], 2))
    return {"isometry": iso, "completeness": comp, "adjoint": adj}


# -- N-adic words and the projection-valued measure ------------------------------

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class NAdicWord:
    letters: tuple[int, ...]
    N: int

    def __post_init__(self):
        if self.N < 2:
            raise DomainError("N must be >= 2")
        letters = tuple(int(a) for a in self.letters)
        if any(not 0 <= a < self.N for a in letters):
            raise DomainError(f"letters must lie in 0..{self.N - 1}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def extend(self, b: int) -> "NAdicWord":
        return NAdicWord(self.letters + (b,), self.N)

    def to_string(self) -> str:
        if self.N > len(_DIGITS):
            raise DomainError("digit strings need N <= 36")
        return "".join(_DIGITS[a] for a in self.letters)

    @classmethod
    def from_string(cls, text: str, N: int) -> "NAdicWord":
        return cls(tuple(_DIGITS.index(ch) for ch in text.lower()), N)


def all_words(N: int, length: int) -> list[NAdicWord]:
    """Words of a given length in lexicographic order."""
    words = [()]
    for _ in range(length):
        words = [w + (a,) for w in words for a in range(N)]
    return [NAdicWord(w, N) for w in words]


def partition_interval(a: NAdicWord, N: int | None = None) -> tuple[Fraction, Fraction]:
    """I_k(a) = [sum a_i N^-i, sum a_i N^-i + N^-k) with exact rationals."""
    N = a.N if N is None else N
    if N != a.N:
        raise DomainError("word alphabet does not match N")
    lo = sum((Fraction(x, N**i) for i, x in enumerate(a.letters, start=1)), Fraction(0))
    return lo, lo + Fraction(1, N ** len(a))


def apply_word_star(f: LatticeFunction, a: NAdicWord, bank) -> LatticeFunction:
    """S_a^* f with S_a = S_{a_1} ... S_{a_k}, i.e. S_{a_1}^* is applied first."""
    out = f
    for letter in a.letters:
        out = apply_S_star(letter, out, bank)
    return out


def pvm_measure(f: LatticeFunction, a: NAdicWord, bank, tol: float = 1e-12) -> float:
    """mu_f(I(a)) = ||E(I(a)) f||^2 = ||S_a^* f||^2 for a unit vector f."""
    if abs(f.norm() - 1.0) > tol:
        raise NormalizationError(f"f must be a unit vector, norm is {f.norm()!r}")
    if len(a) > f.level:
        raise GridError(f"a word of length {len(a)} needs f on level >= {len(a)}")
    return apply_word_star(f, a, bank).norm() ** 2


# -- cyclic-group Fourier pair ---------------------------------------------------


def _cyclic_norm(bank: FilterBank, normalizer) -> float:
    if normalizer == "dft":
        return float(bank.N)
    if normalizer == "constant":
        return bank.norm
    return float(normalizer)


def cyclic_fourier(bank: FilterBank, normalizer="dft") -> np.ndarray:
    """A[i, j, g] = norm^-1 sum_{w^N = z_g} w^-j m_i(w), with z_g = t_g^N.

    ``normalizer`` is ``"dft"`` (norm = N, default), ``"constant"`` (the bank's
    c, c_q constant) or a number.
    """
    if bank.variant == "qradial":
        raise GridError("the cyclic transform needs root-of-unity orbits")
    pts = bank.orbit  # (G, N): the N roots of t^N
    j = np.arange(bank.N)
    powers = pts[:, None, :] ** (-j[None, :, None])  # (G, j, r)
    A = np.einsum("igr,gjr->ijg", bank.filters, powers)
    return A / _cyclic_norm(bank, normalizer)


def cyclic_fourier_inverse(A: np.ndarray, bank: FilterBank, normalizer="dft") -> np.ndarray:
    """m_i(w) = (norm/N) sum_j w^j A[i, j](w^N) on the bank's orbits, shape (N, G, N)."""
    if bank.variant == "qradial":
        raise GridError("the cyclic transform needs root-of-unity orbits")
    pts = bank.orbit
    j = np.arange(bank.N)
    powers = pts[:, None, :] ** j[None, :, None]
    return np.einsum("ijg,gjr->igr", A, powers) * (_cyclic_norm(bank, normalizer) / bank.N)

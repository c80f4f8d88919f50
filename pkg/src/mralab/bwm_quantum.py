"""The SO_q(N) braid operator G, its companion E, and the BWM relation checks.

Tensor conventions: e_{i,j} is the N x N matrix unit at (pos(i), pos(j)) with
positions taken from the ascending index set I; A (x) B is ``np.kron(A, B)``
(first factor slowest), so e_{i,j} (x) e_{k,l} sits at row (i,k), column (j,l).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MralabError, RouteDisagreementError
from .q_calculus import QParam, q_number

__all__ = [
    "BIndexSet",
    "TensorOperator",
    "GVariant",
    "LITERAL",
    "DOCUMENTED_VARIANTS",
    "build_G",
    "build_E_direct",
    "build_E_from_G",
    "SingularOperatorError",
    "ybe_residual",
    "ybe_routes",
    "bwm_residuals",
    "cubic_residual",
    "e_squared_check",
    "x_value",
    "estimate_p",
    "p_from_x",
    "CROSS_ORDERS",
    "markov_trace",
    "quantum_dimension",
    "build_J_and_tau",
]

ROUTE_TOL = 1e-12


class SingularOperatorError(MralabError, ArithmeticError):
    pass


@dataclass(frozen=True)
class BIndexSet:
    """I = (-2m+1, ..., -3, -1, 0, 1, 3, ..., 2m-1), ascending."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError("m must be an integer >= 1")

    @property
    def N(self) -> int:
        return 2 * self.m + 1

    @property
    def labels(self) -> tuple[int, ...]:
        odd = list(range(1, 2 * self.m, 2))
        return tuple([-i for i in reversed(odd)] + [0] + odd)

    def pos(self, i: int) -> int:
        return self.labels.index(i)


@dataclass(frozen=True)
class TensorOperator:
    arity: int
    index: BIndexSet
    q: float
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.arity not in (2, 3):
            raise DomainError("arity must be 2 or 3")
        d = self.index.N**self.arity
        if self.entries.shape != (d, d):
            raise DomainError(f"entries must be {d}x{d}")

    @property
    def dim(self) -> int:
        return self.index.N

    @property
    def m(self) -> int:
        return self.index.m

    def to_json(self) -> str:
        rows = [[[z.real, z.imag] for z in row] for row in self.entries.tolist()]
        return json.dumps({"m": self.m, "q": self.q, "arity": self.arity, "dim": self.dim,
                           "entries": rows})

    @classmethod
    def from_json(cls, text: str) -> "TensorOperator":
        doc = json.loads(text)
        E = np.array([[complex(a, b) for a, b in row] for row in doc["entries"]])
        return cls(doc["arity"], BIndexSet(doc["m"]), doc["q"], E)


@dataclass(frozen=True)
class GVariant:
    """Reading of the summation conditions in the G formula.

    swap:            "i!=j" sums the flip over all i != j; "i!=+-j" also drops j = -i.
    diag_order:      the (q - 1/q) e_ii (x) e_jj sum runs over "i<j" or "j<i".
    cross_order:     the (q - 1/q) q^{s(i+j)/2} e_ij (x) e_-i,-j sum runs over "j<i", "i<j",
                     "i+j<0" or "i+j>0".
    cross_exponent:  s = +1 or -1 in that exponent.
    """

    swap: str = "i!=j"
    diag_order: str = "i<j"
    cross_order: str = "j<i"
    cross_exponent: int = 1

    def __post_init__(self):
        if self.swap not in ("i!=j", "i!=+-j"):
            raise DomainError("swap must be 'i!=j' or 'i!=+-j'")
        if self.diag_order not in ("i<j", "j<i"):
            raise DomainError("diag_order must be 'i<j' or 'j<i'")
        if self.cross_order not in CROSS_ORDERS:
            raise DomainError(f"cross_order must be one of {CROSS_ORDERS}")
        if self.cross_exponent not in (1, -1):
            raise DomainError("cross_exponent must be +1 or -1")

    @property
    def name(self) -> str:
        return (f"swap[{self.swap}]/diag[{self.diag_order}]/cross[{self.cross_order}]"
                f"/exp[{'+' if self.cross_exponent > 0 else '-'}]")


CROSS_ORDERS = ("j<i", "i<j", "i+j<0", "i+j>0")
LITERAL = GVariant()
DOCUMENTED_VARIANTS = tuple(
    GVariant(s, d, c, e)
    for s in ("i!=j", "i!=+-j")
    for d in ("i<j", "j<i")
    for c in CROSS_ORDERS
    for e in (1, -1)
)


def _q(q) -> float:
    return QParam(q).q


def _unit_pair(G: np.ndarray, I: BIndexSet, i, j, k, l, coeff):
    # accumulate coeff * e_{i,j} (x) e_{k,l}
    N = I.N
    G[I.pos(i) * N + I.pos(k), I.pos(j) * N + I.pos(l)] += coeff


def _order(a, b, rule) -> bool:
    if rule == "i<j":
        return a < b
    if rule == "j<i":
        return b < a
    return a + b < 0 if rule == "i+j<0" else a + b > 0


def build_G(m: int, q, variant: GVariant = LITERAL) -> TensorOperator:
    """G as the sum of its five groups of matrix-unit terms."""
    I = BIndexSet(m)
    q = _q(q)
    N = I.N
    G = np.zeros((N * N, N * N))
    L = I.labels
    d = q - 1.0 / q
    for i in L:
        if i != 0:
            _unit_pair(G, I, i, i, i, i, q)
            _unit_pair(G, I, i, -i, -i, i, 1.0 / q)
    _unit_pair(G, I, 0, 0, 0, 0, 1.0)
    for i in L:
        for j in L:
            if i == j or (variant.swap == "i!=+-j" and i == -j):
                continue
            _unit_pair(G, I, i, j, j, i, 1.0)
    for i in L:
        for j in L:
            if _order(i, j, variant.diag_order):
                _unit_pair(G, I, i, i, j, j, d)
            if _order(i, j, variant.cross_order):
                _unit_pair(G, I, i, j, -i, -j, -d * q ** (variant.cross_exponent * (i + j) / 2))
    return TensorOperator(2, I, q, G)


def build_E_direct(m: int, q) -> TensorOperator:
    """E = sum_{i,j} q^{(i+j)/2} e_{i,j} (x) e_{-i,-j} = v v^T, v_(a,c) = q^{a/2} delta_{c,-a}."""
    I = BIndexSet(m)
    q = _q(q)
    N = I.N
    v = np.zeros(N * N)
    for a in I.labels:
        v[I.pos(a) * N + I.pos(-a)] = q ** (a / 2)
    return TensorOperator(2, I, q, np.outer(v, v))


def _mat(G) -> np.ndarray:
    return np.asarray(G.entries if isinstance(G, TensorOperator) else G)


def build_E_from_G(G, q, cond_max: float = 1e12) -> tuple[np.ndarray, float]:
    """(E, cond(G)) with E = 1 - (q - 1/q)^{-1} (G - G^{-1})."""
    A = _mat(G)
    q = _q(q)
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularOperatorError(f"G is numerically singular (cond = {cond:.3e})")
    E = np.eye(A.shape[0]) - (A - np.linalg.inv(A)) / (q - 1.0 / q)
    return E, cond


def _kron_route(A: np.ndarray, N: int) -> float:
    Id = np.eye(N)
    G1 = np.kron(A, Id)
    G2 = np.kron(Id, A)
    return float(np.max(np.abs(G1 @ G2 @ G1 - G2 @ G1 @ G2)))


def _contraction_route(A: np.ndarray, N: int) -> float:
    # R[a,b,c,d] = <a b|G|c d>; act on the three-strand tensor index by index
    R = A.reshape(N, N, N, N)
    X = np.eye(N**3).reshape((N,) * 6)

    def g1(T):
        return np.einsum("abij,ijcxyz->abcxyz", R, T)

    def g2(T):
        return np.einsum("bcjk,ajkxyz->abcxyz", R, T)

    lhs = g1(g2(g1(X)))
    rhs = g2(g1(g2(X)))
    return float(np.max(np.abs(lhs - rhs)))


def ybe_routes(G) -> tuple[float, float]:
    A = _mat(G)
    N = int(round(math.sqrt(A.shape[0])))
    if N * N != A.shape[0] or A.shape[0] != A.shape[1]:
        raise DomainError("G must act on H (x) H")
    return _kron_route(A, N), _contraction_route(A, N)


def ybe_residual(G) -> float:
    """||G1 G2 G1 - G2 G1 G2||_max from the Kronecker route.

    Raises :class:`RouteDisagreementError` when the contraction route differs
    by more than 1e-12 * max(1, residual); the scale factor only matters for
    residuals above one, where double rounding alone exceeds 1e-12.
    """
    a, b = ybe_routes(G)
    if abs(a - b) > ROUTE_TOL * max(1.0, abs(a), abs(b)):
        raise RouteDisagreementError(f"Kronecker route {a!r} vs contraction route {b!r}")
    return a


def bwm_residuals(G, E, p: float) -> dict:
    A, E = _mat(G), _mat(E)
    Ginv = np.linalg.inv(A)
    return {
        "EG": float(np.max(np.abs(E @ A - E / p))),
        "EGE": float(np.max(np.abs(E @ A @ E - p * E))),
        "EGinvE": float(np.max(np.abs(E @ Ginv @ E - E / p))),
    }


def cubic_residual(G, q, p: float) -> float:
    A = _mat(G)
    q = _q(q)
    Id = np.eye(A.shape[0])
    C = (A - q * Id) @ (A + Id / q) @ (A - Id / p)
    return float(np.max(np.abs(C)))


def x_value(m: int, q) -> float:
    q = _q(q)
    return math.fsum(q**i for i in BIndexSet(m).labels)


def e_squared_check(E, m: int, q) -> float:
    """||E^2 - x E||_max with x = sum_{i in I} q^i."""
    E = _mat(E)
    return float(np.max(np.abs(E @ E - x_value(m, q) * E)))


def estimate_p(G, q, cluster_tol: float = 1e-8) -> dict:
    """Candidates for p from the spectrum of G and from x.

    Eigenvalues within ``cluster_tol`` (relative) of q or -1/q are assigned to
    those factors; the rest form the third cluster, whose weighted mean gives
    p_spectral = 1/lambda.  ``ambiguous`` is set when the remainder is empty,
    spread out, or not real.
    """
    A = _mat(G)
    q = _q(q)
    ev = np.linalg.eigvals(A)
    ev = ev[np.lexsort((ev.imag, ev.real))]
    near_q = np.abs(ev - q) <= cluster_tol * max(1.0, q)
    near_m = np.abs(ev + 1.0 / q) <= cluster_tol / q
    rest = ev[~(near_q | near_m)]
    ambiguous = rest.size == 0
    p_spec = None
    if rest.size:
        lam = complex(np.mean(rest))
        spread = float(np.max(np.abs(rest - lam)))
        ambiguous = spread > 1e-6 * abs(lam) or abs(lam.imag) > 1e-9
        p_spec = 1.0 / lam.real if lam.real != 0 else None
    roots = p_from_x(x_value(G.m, q), q) if isinstance(G, TensorOperator) else None
    return {
        "eigenvalues": [[z.real, z.imag] for z in ev.tolist()],
        "n_q": int(near_q.sum()),
        "n_minus_qinv": int(near_m.sum()),
        "p_spectral": p_spec,
        "p_from_x": roots,
        "ambiguous": bool(ambiguous),
    }


def p_from_x(x: float, q) -> tuple[float, float]:
    """Roots of p - 1/p = (x - 1)(q - 1/q)."""
    q = _q(q)
    c = (x - 1.0) * (q - 1.0 / q)
    s = math.sqrt(c * c + 4.0)
    return (c + s) / 2.0, (c - s) / 2.0


def quantum_dimension(m: int, q) -> float:
    """d_q = [2m+1]_{q^2}."""
    return q_number(BIndexSet(m).N, _q(q), base_exponent=2)


def markov_trace(m: int, q) -> float:
    """w(G) = q^{2m} / d_q."""
    q = _q(q)
    return q ** (2 * m) / quantum_dimension(m, q)


def build_J_and_tau(m: int, q) -> dict:
    """J_{i,j} = q^{j/2} delta_{i, N+1-j} (positions 1..N) and tau = sum_i e_i (x) J^{-1} e_i."""
    I = BIndexSet(m)
    q = _q(q)
    N = I.N
    J = np.zeros((N, N))
    for j in range(1, N + 1):
        J[N - j, j - 1] = q ** (j / 2)
    det = float(np.linalg.det(J))
    if det == 0.0:
        raise SingularOperatorError("J is singular")
    Jinv = np.linalg.inv(J)
    tau = np.zeros(N * N)
    for i in range(N):
        tau += np.kron(np.eye(N)[i], Jinv[:, i])
    return {"J": J, "tau": tau, "det": det, "tau_norm2": float(tau @ tau)}

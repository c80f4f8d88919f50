"""The q-parametric Markov chain on Z_N: transition matrix, sampling, stationary law."""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, NormalizationWarning, StochasticityError
from .q_calculus import QParam, q_number

__all__ = [
    "RNG_ALGORITHM",
    "NORMALIZATIONS",
    "TransitionMatrix",
    "ChainPath",
    "exponent_sigma",
    "matrix_exponent",
    "build_transition",
    "make_rng",
    "simulate",
    "stationary",
    "frequency_sigma",
    "trace_link",
    "exponent_table",
    "chain_summary",
]

RNG_ALGORITHM = f"numpy.random.Philox (numpy {np.__version__}), inverse-CDF sampling"
NORMALIZATIONS = ("row-exact", "qnumber")


def _check_N(N) -> int:
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    return int(N)


def exponent_sigma(s: int, r: int, N: int) -> int:
    """sigma_s(r) = (N + r - s + 1) mod N."""
    N = _check_N(N)
    if not (0 <= s < N and 0 <= r < N):
        raise DomainError("states must lie in 0..N-1")
    return (N + r - s + 1) % N


def matrix_exponent(s: int, r: int, N: int) -> int:
    """Exponent of q in row s, column r of the displayed matrix: ((s - r) mod N) + 1."""
    return (s - r) % N + 1


@dataclass(frozen=True)
class TransitionMatrix:
    """P[s, r] = p(r | s): rows are the current state."""

    N: int
    q: float
    P: np.ndarray
    normalization: str

    @property
    def row_sums(self) -> np.ndarray:
        return self.P.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.P.sum(axis=0)


def build_transition(N: int, q, normalization: str = "row-exact") -> TransitionMatrix:
    """Entries q^((s - r) mod N + 1) / Z with Z = q [N]_q (row-exact) or [N]_q (qnumber)."""
    N = _check_N(N)
    q = QParam(q).q
    if normalization not in NORMALIZATIONS:
        raise DomainError(f"normalization must be one of {NORMALIZATIONS}")
    s = np.arange(N)[:, None]
    r = np.arange(N)[None, :]
    E = (s - r) % N + 1
    Z = q_number(N, q) * (q if normalization == "row-exact" else 1.0)
    P = q ** E.astype(float) / Z
    P.setflags(write=False)
    return TransitionMatrix(N, q, P, normalization)


@dataclass(frozen=True)
class ChainPath:
    states: np.ndarray
    seed: int
    rng: str = RNG_ALGORITHM

    def frequencies(self, N: int) -> np.ndarray:
        return np.bincount(self.states, minlength=N) / self.states.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("step,state\n")
        for n, s in enumerate(self.states.tolist()):
            buf.write(f"{n},{s}\n")
        return buf.getvalue()


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _as_matrix(P) -> np.ndarray:
    return np.asarray(P.P if isinstance(P, TransitionMatrix) else P, dtype=float)


def simulate(P, start: int, steps: int, seed: int) -> ChainPath:
    """Reproducible path of ``steps`` transitions from ``start``."""
    M = _as_matrix(P)
    N = M.shape[0]
    if M.shape != (N, N) or np.any(M < 0) or np.max(np.abs(M.sum(axis=1) - 1.0)) > 1e-12:
        raise StochasticityError("simulation needs a row-stochastic matrix")
    if not 0 <= start < N:
        raise DomainError("start state out of range")
    if steps < 0:
        raise DomainError("steps must be >= 0")
    cdf = np.ascontiguousarray(np.cumsum(M, axis=1))
    cdf[:, -1] = 1.0
    u = np.ascontiguousarray(make_rng(seed).random(steps))
    states = np.asarray(kernels.sample_chain(cdf, int(start), u), dtype=np.int64)
    return ChainPath(states, int(seed))


def stationary(P, tol: float = 1e-15, max_iter: int = 100_000) -> np.ndarray:
    """Fixed point of pi <- pi P by power iteration from the uniform vector.

    A matrix whose rows do not sum to one is rescaled by its mean row sum first,
    with a :class:`NormalizationWarning`.
    """
    M = _as_matrix(P)
    N = M.shape[0]
    sums = M.sum(axis=1)
    if np.max(np.abs(sums - 1.0)) > 1e-12:
        warnings.warn(f"rows sum to {sums.mean():.6g}, rescaling before iterating",
                      NormalizationWarning, stacklevel=2)
        M = M / sums[:, None]
    pi = np.full(N, 1.0 / N)
    for _ in range(max_iter):
        nxt = pi @ M
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - pi)) < tol:
            return nxt
        pi = nxt
    raise ConvergenceError(f"power iteration did not settle in {max_iter} steps")


def frequency_sigma(P, steps: int) -> np.ndarray:
    """Standard deviation of each state's empirical frequency over ``steps + 1`` visits.

    Uses the Markov-chain central limit variance 2<g, Z g>_pi - <g, g>_pi of the
    centred indicator g, with Z = (I - P + 1 pi)^-1 the fundamental matrix.
    Successive states are correlated, so this exceeds the i.i.d. value
    sqrt(pi (1 - pi) / n) whenever the chain tends to stay put.
    """
    M = _as_matrix(P)
    N = M.shape[0]
    pi = stationary(M)
    Z = np.linalg.inv(np.eye(N) - M + np.outer(np.ones(N), pi))
    out = np.empty(N)
    for s in range(N):
        g = -pi[s] * np.ones(N)
        g[s] += 1.0
        out[s] = 2.0 * np.dot(pi * g, Z @ g) - np.dot(pi * g, g)
    return np.sqrt(out / (steps + 1))


def trace_link(N: int, q, i: int, j: int) -> float:
    """q^((N + j - i + 1) mod N) / [N]_{q^2}."""
    N = _check_N(N)
    q = QParam(q).q
    if not (0 <= i < N and 0 <= j < N):
        raise DomainError("indices must lie in 0..N-1")
    return q ** ((N + j - i + 1) % N) / q_number(N, q, base_exponent=2)


def exponent_table(N: int) -> dict:
    """Side-by-side exponents: displayed matrix, sigma_s(r), and the 2j = N - r - s + 1 variant."""
    N = _check_N(N)
    mat = [[matrix_exponent(s, r, N) for r in range(N)] for s in range(N)]
    sig = [[exponent_sigma(s, r, N) for r in range(N)] for s in range(N)]
    alt = [[(N - r - s + 1) % N for r in range(N)] for s in range(N)]
    return {"matrix": mat, "sigma": sig, "sum_variant": alt}


def chain_summary(T: TransitionMatrix, path: ChainPath | None = None) -> dict:
    out = {
        "N": T.N,
        "q": T.q,
        "normalization": T.normalization,
        "row_sums": T.row_sums.tolist(),
        "col_sums": T.col_sums.tolist(),
    }
    if path is not None:
        out["empirical_freq"] = path.frequencies(T.N).tolist()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NormalizationWarning)
        out["stationary"] = stationary(T).tolist()
    return out

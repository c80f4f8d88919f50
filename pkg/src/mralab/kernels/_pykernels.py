"""Pure-numpy fallback for the series kernels.

Each function evaluates the normalised series for a whole array at once and
retires points as soon as their tail test passes, so the per-point term count
matches the compiled kernel exactly.
"""

import numpy as np


def bessel_sum(alpha, w, rel_tol, max_terms):
    w = np.asarray(w, dtype=np.complex128)
    s = np.ones_like(w)
    t = np.ones_like(w)
    active = np.ones(w.shape, dtype=bool)
    used = np.full(w.shape, max_terms)
    tol2 = rel_tol * rel_tol
    w2 = np.abs(w) ** 2
    for k in range(1, max_terms + 1):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        t[idx] = -t[idx] * w[idx] / (k * (alpha + k))
        s[idx] += t[idx]
        ratio = w2[idx] / ((k + 1.0) * (alpha + k + 1.0)) ** 2
        t2 = np.abs(t[idx]) ** 2
        done = (t2 == 0.0) | ((ratio < 1.0) & (t2 * ratio < tol2 * np.abs(s[idx]) ** 2))
        used[idx[done]] = k
        active[idx[done]] = False
    failed = bool(np.any(used == max_terms))
    worst = int(used.max()) if used.size else 0
    return s, worst, failed


def q_bessel_sum(alpha, q, y, rel_tol, max_terms):
    y = np.asarray(y, dtype=np.complex128)
    s = np.ones_like(y)
    t = np.ones_like(y)
    active = np.ones(y.shape, dtype=bool)
    used = np.full(y.shape, max_terms)
    tol2 = rel_tol * rel_tol
    y2 = np.abs(y) ** 2
    qk = 1.0
    qak = q ** (alpha + 1.0)
    for k in range(1, max_terms + 1):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        qk *= q
        t[idx] = -t[idx] * qk * y[idx] / ((1.0 - qak) * (1.0 - qk))
        qak *= q
        s[idx] += t[idx]
        ratio = y2[idx] * (qk * q) ** 2 / ((1.0 - qak) * (1.0 - qk * q)) ** 2
        t2 = np.abs(t[idx]) ** 2
        done = (t2 == 0.0) | ((ratio < 1.0) & (t2 * ratio < tol2 * np.abs(s[idx]) ** 2))
        used[idx[done]] = k
        active[idx[done]] = False
    failed = bool(np.any(used == max_terms))
    worst = int(used.max()) if used.size else 0
    return s, worst, failed


def sample_chain(cdf, start, u):
    cdf = np.asarray(cdf, dtype=float)
    N = cdf.shape[1]
    out = np.empty(len(u) + 1, dtype=np.int64)
    s = int(start)
    out[0] = s
    rows = [row[:-1] for row in cdf]
    for n, un in enumerate(u):
        s = min(int(np.searchsorted(rows[s], un, side="right")), N - 1)
        out[n + 1] = s
    return out

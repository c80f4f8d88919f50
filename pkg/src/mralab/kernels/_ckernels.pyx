# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled series kernels. Mirrors ``_pykernels`` term for term."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow as cpow_real

cnp.import_array()


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def bessel_sum(double alpha, double complex[::1] w, double rel_tol, int max_terms):
    cdef Py_ssize_t n = w.shape[0], i
    cdef int k, used, worst = 0
    cdef double complex s, t
    cdef double tol2 = rel_tol * rel_tol, ratio
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef bint failed = False
    with nogil:
        for i in range(n):
            s = 1.0
            t = 1.0
            used = max_terms
            for k in range(1, max_terms + 1):
                t = -t * w[i] / (k * (alpha + k))
                s = s + t
                ratio = cabs2(w[i]) / ((k + 1.0) * (alpha + k + 1.0)) ** 2
                if cabs2(t) == 0.0 or (ratio < 1.0 and cabs2(t) * ratio < tol2 * cabs2(s)):
                    used = k
                    break
            if used == max_terms:
                failed = True
            if used > worst:
                worst = used
            o[i] = s
    return out, worst, failed


def q_bessel_sum(double alpha, double q, double complex[::1] y, double rel_tol, int max_terms):
    cdef Py_ssize_t n = y.shape[0], i
    cdef int k, used, worst = 0
    cdef double complex s, t
    cdef double qk, qak, tol2 = rel_tol * rel_tol, ratio
    cdef double qa = cpow_real(q, alpha + 1.0)
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef bint failed = False
    with nogil:
        for i in range(n):
            s = 1.0
            t = 1.0
            qk = 1.0
            qak = qa
            used = max_terms
            for k in range(1, max_terms + 1):
                qk = qk * q
                t = -t * qk * y[i] / ((1.0 - qak) * (1.0 - qk))
                qak = qak * q
                s = s + t
                ratio = cabs2(y[i]) * (qk * q) * (qk * q) / ((1.0 - qak) * (1.0 - qk * q)) ** 2
                if cabs2(t) == 0.0 or (ratio < 1.0 and cabs2(t) * ratio < tol2 * cabs2(s)):
                    used = k
                    break
            if used == max_terms:
                failed = True
            if used > worst:
                worst = used
            o[i] = s
    return out, worst, failed


def sample_chain(double[:, ::1] cdf, int start, double[::1] u):
    """Inverse-CDF walk: state_{n+1} = first r with u_n < cdf[state_n, r]."""
    cdef Py_ssize_t steps = u.shape[0], n, r
    cdef Py_ssize_t N = cdf.shape[1]
    out = np.empty(steps + 1, dtype=np.int64)
    cdef long long[::1] o = out
    cdef long long s = start
    o[0] = s
    with nogil:
        for n in range(steps):
            r = 0
            while r < N - 1 and u[n] >= cdf[s, r]:
                r += 1
            s = r
            o[n + 1] = s
    return out

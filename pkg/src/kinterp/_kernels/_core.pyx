# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: the theta-batch restricted-norm sweep and the
one-sided cyclic Jacobi singular value iteration.  Mirrors ``_fallback`` semantics."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, hypot, log, sqrt, INFINITY

cnp.import_array()


def theta_sweep(double[::1] u, double[::1] kvals, double[::1] theta, double q,
                bint include_subgrid=True):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t m = theta.shape[0]
    if kvals.shape[0] != n:
        raise ValueError("kvals must match u")
    out_arr = np.empty(m)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double th, acc, best, x, c
    cdef double[::1] logk
    cdef double[::1] wkq
    cdef double[::1] w

    if q == INFINITY:
        logk_arr = np.empty(n)
        logk = logk_arr
        for j in range(n):
            logk[j] = log(kvals[j]) if kvals[j] > 0 else -INFINITY
        for i in range(m):
            th = theta[i]
            best = -INFINITY
            for j in range(n):
                x = th * u[j] + logk[j]
                if x > best:
                    best = x
            out[i] = exp(best)
        return out_arr

    if q > 16.0:
        raise ValueError("q too large for the plain-sum kernel (q <= 16)")
    w_arr = np.empty(n)
    w = w_arr
    w[0] = 0.5 * (u[1] - u[0])
    w[n - 1] = 0.5 * (u[n - 1] - u[n - 2])
    for j in range(1, n - 1):
        w[j] = 0.5 * (u[j + 1] - u[j - 1])
    wkq_arr = np.empty(n)
    wkq = wkq_arr
    for j in range(n):
        wkq[j] = w[j] * kvals[j] ** q
    for i in range(m):
        th = theta[i]
        acc = 0.0
        for j in range(n):
            acc += exp(q * th * u[j]) * wkq[j]
        if include_subgrid:
            acc += exp(q * th * u[n - 1]) * kvals[n - 1] ** q / ((1.0 - th) * q)
        c = (q * th * (1.0 - th)) ** (1.0 / q)
        out[i] = c * acc ** (1.0 / q)
    return out_arr


def jacobi_svd(m_in, double tol=1e-13, int max_sweeps=60):
    a_arr = np.array(m_in, dtype=complex, order="F")
    cdef double complex[::1, :] a = a_arr
    cdef Py_ssize_t n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    cdef Py_ssize_t p, qi, k, sweep
    cdef bint rotated
    cdef double app, aqq, mod, tau, t, c, s
    cdef double complex apq, phase, xp, xq
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for qi in range(p + 1, n):
                apq = 0.0
                app = 0.0
                aqq = 0.0
                for k in range(n):
                    xp = a[k, p]
                    xq = a[k, qi]
                    apq += xp.conjugate() * xq
                    app += xp.real * xp.real + xp.imag * xp.imag
                    aqq += xq.real * xq.real + xq.imag * xq.imag
                mod = sqrt(apq.real ** 2 + apq.imag ** 2)
                # sqrt-of-each avoids underflow of the product for nearly
                # dead columns (rank-deficient inputs)
                if sqrt(app) * sqrt(aqq) == 0.0 or mod <= tol * (sqrt(app) * sqrt(aqq)):
                    continue
                rotated = True
                phase = apq / mod
                tau = (aqq - app) / (2.0 * mod)
                if tau != 0.0:
                    # hypot keeps huge tau from overflowing tau*tau
                    t = (1.0 if tau > 0 else -1.0) / (fabs(tau) + hypot(1.0, tau))
                else:
                    t = 1.0
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    xp = a[k, p]
                    xq = a[k, qi]
                    a[k, p] = c * xp - s * phase.conjugate() * xq
                    a[k, qi] = s * phase * xp + c * xq
        if not rotated:
            break
    out = np.empty(n)
    cdef double[::1] ov = out
    cdef double acc
    for p in range(n):
        acc = 0.0
        for k in range(n):
            acc += a[k, p].real ** 2 + a[k, p].imag ** 2
        ov[p] = sqrt(acc)
    return out

"""Pure-numpy implementations of the hot kernels.

Selected at import time by :mod:`kinterp._kernels` when the compiled
extension is unavailable (or explicitly forced).  Semantics must match
``_core.pyx`` to the level the cross-backend tests assert (rtol 1e-10).
"""

from __future__ import annotations

import numpy as np

_CHUNK = 128


def theta_sweep(u, kvals, theta, q, include_subgrid=True):
    """Normalized restricted interpolation norms for a batch of thetas.

    For each theta[i] computes
        c_{theta,q} * ( sum_j w_j (e^{theta*u_j} K_j)^q  +  tail_i )^{1/q}
    with trapezoid weights w_j in the log variable u and, when
    ``include_subgrid`` is set, the closed-form contribution of the linear
    continuation of K below the grid floor:
        tail_i = (e^{theta*u_N} K_N)^q / ((1-theta) q).
    For q = inf the sup replaces the sum and the normalization constant
    is 1.
    """
    u = np.asarray(u, dtype=float)
    kvals = np.asarray(kvals, dtype=float)
    theta = np.asarray(theta, dtype=float)
    n = len(u)
    if kvals.shape != (n,):
        raise ValueError("kvals must match u")
    if np.isinf(q):
        out = np.empty(len(theta))
        with np.errstate(divide="ignore"):
            logk = np.where(kvals > 0, np.log(kvals), -np.inf)
        for a in range(0, len(theta), _CHUNK):
            th = theta[a : a + _CHUNK, None]
            out[a : a + _CHUNK] = np.max(th * u[None, :] + logk[None, :], axis=1)
        return np.exp(out)
    if q > 16:
        raise ValueError("q too large for the plain-sum kernel (q <= 16)")
    w = np.empty(n)
    w[1:-1] = 0.5 * (u[2:] - u[:-2])
    w[0] = 0.5 * (u[1] - u[0])
    w[-1] = 0.5 * (u[-1] - u[-2])
    kq = kvals**q
    out = np.empty(len(theta))
    for a in range(0, len(theta), _CHUNK):
        th = theta[a : a + _CHUNK, None]
        base = np.exp(q * th * u[None, :]) @ (w * kq)
        if include_subgrid:
            base = base + np.exp(q * theta[a : a + _CHUNK] * u[-1]) * kq[-1] / (
                (1.0 - theta[a : a + _CHUNK]) * q
            )
        out[a : a + _CHUNK] = base
    c = (q * theta * (1.0 - theta)) ** (1.0 / q)
    return c * out ** (1.0 / q)


def jacobi_svd(m, tol=1e-13, max_sweeps=60):
    """Singular values by one-sided cyclic Jacobi on the columns.

    Rotates column pairs until every implicit Gram entry satisfies
    |c_p . c_q| <= tol * |c_p| |c_q|; the column norms are then the
    singular values (unsorted).  Working on the columns directly keeps
    full relative accuracy for small singular values, which forming the
    Gram matrix would square away.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for qi in range(p + 1, n):
                cp = a[:, p]
                cq = a[:, qi]
                apq = np.vdot(cp, cq)
                app = np.real(np.vdot(cp, cp))
                aqq = np.real(np.vdot(cq, cq))
                mod = abs(apq)
                # sqrt-of-each avoids underflow of the product for nearly
                # dead columns (rank-deficient inputs)
                denom = np.sqrt(app) * np.sqrt(aqq)
                if denom == 0.0 or mod <= tol * denom:
                    continue
                rotated = True
                phase = apq / mod
                tau = (aqq - app) / (2.0 * mod)
                # hypot keeps huge tau from overflowing tau*tau
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                new_p = c * cp - s * np.conj(phase) * cq
                new_q = s * phase * cp + c * cq
                a[:, p] = new_p
                a[:, qi] = new_q
        if not rotated:
            break
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=0))

#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Covers the two hot paths: the per-node restricted-norm sweep (the inner
loop of the extrapolation-functional suites) and the one-sided Jacobi
singular value iteration.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from kinterp._kernels import BACKEND, _fallback  # noqa: E402

try:
    from kinterp._kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_theta_sweep():
    print("theta_sweep (restricted-norm batch per grid node)")
    h = np.log(2) / 64
    for n in (1277, 2553, 5105):
        u = h * np.arange(n)
        kvals = np.minimum(np.exp(-0.6 * u), 1.0)
        theta = 1.0 - 1.0 / (2.0 * (1.0 + u))
        for q in (1.0, np.inf):
            tf, rf = _time(_fallback.theta_sweep, u, kvals, theta, q)
            line = f"  n={n:5d} q={q:<4} fallback {tf*1e3:8.2f} ms"
            if _core is not None:
                tc, rc = _time(_core.theta_sweep, u, kvals, theta, q)
                rel = np.max(np.abs(np.asarray(rc) - rf) / rf)
                line += f"   compiled {tc*1e3:8.2f} ms   speedup {tf/tc:5.1f}x   agree {rel:.1e}"
            print(line)


def bench_jacobi():
    print("jacobi_svd (one-sided singular value iteration)")
    rng = np.random.default_rng(0)
    for n in (32, 64, 128):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m /= np.linalg.norm(m)
        tf, sf = _time(_fallback.jacobi_svd, m, repeat=2)
        ref = np.sort(np.linalg.svd(m, compute_uv=False))[::-1]
        line = f"  n={n:4d} fallback {tf*1e3:9.1f} ms"
        if _core is not None:
            tc, sc = _time(_core.jacobi_svd, m, repeat=2)
            err = np.max(np.abs(np.sort(sc)[::-1] - ref))
            line += f"   compiled {tc*1e3:9.1f} ms   speedup {tf/tc:5.1f}x   |err| {err:.1e}"
        print(line)


if __name__ == "__main__":
    print(f"active backend at import: {BACKEND}")
    if _core is None:
        print("compiled extension unavailable; timing the fallback only")
    bench_theta_sweep()
    bench_jacobi()

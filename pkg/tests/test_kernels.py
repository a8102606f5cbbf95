"""Cross-backend agreement between the compiled kernels and the numpy
fallback, plus accuracy against independent oracles."""

import numpy as np
import pytest

from kinterp._kernels import BACKEND, _fallback

try:
    from kinterp._kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled extension not built")


def sweep_inputs(n=1277, seed=0):
    rng = np.random.default_rng(seed)
    h = np.log(2) / 64
    u = h * np.arange(n)
    slopes = np.sort(rng.uniform(0.1, 1.0, n))[::-1]
    k = np.cumsum(slopes * np.diff(np.exp(-u)[::-1], prepend=0.0))[::-1]
    k = np.maximum.accumulate(k[::-1])[::-1]
    k = np.minimum(np.exp(-0.6 * u) + 1e-6, 1.0)
    theta = 1.0 - 1.0 / (2.0 * (1.0 + u))
    return u, k, theta


class TestThetaSweep:
    @needs_core
    @pytest.mark.parametrize("q", [1.0, 2.0, 5.0, np.inf])
    def test_backends_agree(self, q):
        u, k, theta = sweep_inputs()
        a = np.asarray(_core.theta_sweep(u, k, theta, q))
        b = _fallback.theta_sweep(u, k, theta, q)
        assert np.max(np.abs(a - b) / b) < 1e-10

    def test_subgrid_toggle(self):
        u, k, theta = sweep_inputs()
        with_tail = _fallback.theta_sweep(u, k, theta, 1.0, True)
        without = _fallback.theta_sweep(u, k, theta, 1.0, False)
        assert np.all(with_tail >= without)

    def test_quadrature_oracle_single_theta(self):
        # against scipy quadrature of the same piecewise-linear-in-log model
        from scipy.integrate import quad

        u, k, theta = sweep_inputs(n=257)
        def kfun(uu):
            return np.interp(uu, u, k)
        for i in (0, 100, 256):
            th = theta[i]
            body = quad(lambda uu: (np.exp(th * uu) * kfun(uu)) ** 1.0, 0, u[-1], limit=400)[0]
            tail = np.exp(th * u[-1]) * k[-1] / (1 - th)
            want = th * (1 - th) * (body + tail)
            got = _fallback.theta_sweep(u, k, theta, 1.0)[i]
            assert got == pytest.approx(want, rel=1e-5)

    def test_q_cap(self):
        u, k, theta = sweep_inputs(n=64)
        with pytest.raises(ValueError):
            _fallback.theta_sweep(u, k, theta, 32.0)


class TestJacobiSvd:
    @needs_core
    def test_backends_agree(self):
        rng = np.random.default_rng(3)
        m = rng.normal(size=(24, 24)) + 1j * rng.normal(size=(24, 24))
        a = np.sort(np.asarray(_core.jacobi_svd(m)))[::-1]
        b = np.sort(_fallback.jacobi_svd(m))[::-1]
        assert np.max(np.abs(a - b)) / a[0] < 1e-12

    @pytest.mark.parametrize("n", [3, 8, 24])
    def test_fallback_against_lapack(self, n):
        rng = np.random.default_rng(n)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        got = np.sort(_fallback.jacobi_svd(m))[::-1]
        ref = np.linalg.svd(m, compute_uv=False)
        assert np.max(np.abs(got - ref)) / ref[0] < 1e-12

    def test_tiny_singular_values_resolved(self):
        # the one-sided iteration keeps relative accuracy on tiny values
        # (assembling the product itself perturbs sigma_3 = 1e-12 by about
        # eps * ||m|| / sigma_3 ~ 2e-4 relative, which bounds what any SVD
        # can recover; a Gram-based route would lose the value entirely)
        d = np.array([1.0, 1e-9, 1e-12])
        rng = np.random.default_rng(0)
        q1, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        q2, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        m = q1 @ np.diag(d) @ q2
        got = np.sort(_fallback.jacobi_svd(m))[::-1]
        assert np.max(np.abs(got - d) / d) < 1e-3

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            _fallback.jacobi_svd(np.ones((2, 3)))


def test_backend_reported():
    assert BACKEND in ("compiled", "fallback")

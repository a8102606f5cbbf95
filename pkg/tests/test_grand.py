import math

import numpy as np
import pytest
from scipy.integrate import quad

from kinterp.grid import StepRearrangement
from kinterp.grand import (
    GrandParams,
    grand_norm_def,
    grand_norm_fk,
    k_side_llogl,
    llogl_alpha_norm,
    log_power_cell_integral,
    verify_sum_identity,
)

ONE = StepRearrangement([1.0], [1.0])


@pytest.fixture(scope="module")
def grid_breaks(grid):
    return grid.nodes[::-1].copy()


@pytest.fixture(scope="module")
def inv_sqrt_steps(grid_breaks):
    br = grid_breaks
    lo = np.concatenate(([0.0], br[:-1]))
    avg = 2 * (np.sqrt(br) - np.sqrt(lo)) / (br - lo)  # cell means of s^-1/2
    return StepRearrangement(br, avg)


class TestGrandDef:
    def test_constant_sup_at_endpoint(self):
        gp = GrandParams(2.0)
        assert grand_norm_def(ONE, gp) == pytest.approx(1.0, abs=2e-3)

    def test_homogeneity(self):
        gp = GrandParams(2.0)
        c = 3.7
        fc = StepRearrangement([1.0], [c])
        assert grand_norm_def(fc, gp) == pytest.approx(c * grand_norm_def(ONE, gp), rel=1e-12)

    def test_borderline_member_finite(self, inv_sqrt_steps):
        # f*(s) = s^(-1/p) lies in the grand space but not L^p
        gp = GrandParams(2.0)
        v = grand_norm_def(inv_sqrt_steps, gp)
        assert np.isfinite(v) and v > 0
        # oracle: eps^{1/(2-eps)} ||f||_{2-eps} with closed-form norms
        eps = np.geomspace(1e-6, 0.999, 4000)
        r = 2.0 - eps
        norms = (2.0 / (2.0 - r)) ** (1.0 / r)  # int_0^1 s^(-r/2) ds = 2/(2-r)
        oracle = np.max(eps ** (1.0 / r) * norms)
        assert v == pytest.approx(oracle, rel=5e-3)

    def test_monotone_under_domination(self, rng):
        gp = GrandParams(2.5, alpha=1.0)
        br = np.unique(np.sort(rng.uniform(0.05, 1.0, 12)))
        lv = np.sort(rng.uniform(0.5, 2.0, len(br)))[::-1]
        f = StepRearrangement(br, lv)
        g = StepRearrangement(br, lv + 0.3)
        assert grand_norm_def(f, gp) <= grand_norm_def(g, gp) + 1e-12

    def test_one_sided_lp_bound(self, rng):
        # grand norm <= max(1, p-1) ||f||_p
        gp = GrandParams(2.0)
        br = np.unique(np.sort(rng.uniform(0.05, 1.0, 10)))
        lv = np.sort(rng.uniform(0.2, 3.0, len(br)))[::-1]
        f = StepRearrangement(br, lv)
        lp = f.integral(1.0, power=2.0) ** 0.5
        assert grand_norm_def(f, gp) <= max(1.0, 1.0) * lp + 1e-12


class TestGrandFK:
    def test_constant_oracle(self):
        gp = GrandParams(2.0)
        ts = np.linspace(1e-12, 1 - 1e-12, 2_000_001)
        oracle = float(np.max(((1 - ts) / (1 - np.log(ts))) ** 0.5))
        assert grand_norm_fk(ONE, gp) == pytest.approx(oracle, abs=1e-3)
        assert oracle == pytest.approx(0.5638, abs=1e-3)

    def test_zero(self):
        gp = GrandParams(2.0)
        assert grand_norm_fk(StepRearrangement([1.0], [0.0]), gp) == 0.0

    def test_window_against_def(self, rng):
        gp = GrandParams(2.0)
        ratios = []
        for _ in range(15):
            br = np.unique(np.sort(rng.uniform(0.02, 1.0, 14)))
            lv = np.sort(rng.uniform(0.05, 4.0, len(br)))[::-1]
            f = StepRearrangement(br, lv)
            ratios.append(grand_norm_def(f, gp) / grand_norm_fk(f, gp))
        ratios = np.array(ratios)
        assert ratios.max() / ratios.min() < 20  # fixed two-sided window


class TestLogPowerCells:
    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
    def test_against_quadrature(self, alpha):
        for a, b in ((0.0, 0.3), (0.1, 1.0), (1e-6, 1e-3)):
            want = quad(lambda s: (1 - math.log(s)) ** alpha, a, b)[0]
            assert log_power_cell_integral(a, b, alpha) == pytest.approx(want, rel=1e-9)


class TestLLogL:
    def test_constant_closed_forms(self):
        lv, ldiv = llogl_alpha_norm(ONE, 1.0)
        kv, kdiv = k_side_llogl(ONE, 1.0)
        assert lv == pytest.approx(2.0, abs=1e-12)
        assert kv == pytest.approx(1.0, abs=1e-12)
        assert not ldiv and not kdiv

    def test_indicator_closed_form(self):
        ind = StepRearrangement([1 / math.e], [1.0])
        lv, _ = llogl_alpha_norm(ind, 1.0)
        # antiderivative of (1 - log s) is s(2 - log s): value 3/e at 1/e
        assert lv == pytest.approx(3 / math.e, abs=1e-12)

    def test_homogeneity_both_sides(self, rng):
        br = np.unique(np.sort(rng.uniform(0.05, 1.0, 8)))
        lv = np.sort(rng.uniform(0.2, 2.0, len(br)))[::-1]
        f = StepRearrangement(br, lv)
        g = StepRearrangement(br, 2.5 * lv)
        for alpha in (0.5, 1.0, 2.0):
            a1, _ = llogl_alpha_norm(f, alpha)
            a2, _ = llogl_alpha_norm(g, alpha)
            assert a2 == pytest.approx(2.5 * a1, rel=1e-11)
            k1, _ = k_side_llogl(f, alpha)
            k2, _ = k_side_llogl(g, alpha)
            assert k2 == pytest.approx(2.5 * k1, rel=1e-11)

    def test_sqrt_ratio_against_quadrature(self, inv_sqrt_steps):
        rep = verify_sum_identity(inv_sqrt_steps, 1.0)
        lo_or = quad(lambda s: s**-0.5 * (1 - np.log(s)), 0, 1)[0]
        ko_or = quad(lambda s: 2 * np.sqrt(s) / s, 0, 1)[0]
        assert rep.ratio == pytest.approx(lo_or / ko_or, rel=5e-3)
        assert rep.consistent and not rep.llogl_diverged

    def test_divergent_flags_together(self, grid_breaks):
        br = grid_breaks
        vals = 1.0 / (br * (1 - np.log(br)) ** 2)
        vals = np.maximum.accumulate(vals[::-1])[::-1]
        rep = verify_sum_identity(StepRearrangement(br, vals), 1.0)
        assert rep.llogl_diverged and rep.k_diverged and rep.consistent

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_alpha_windows_consistent(self, alpha, rng):
        ratios = []
        for _ in range(10):
            br = np.unique(np.sort(rng.uniform(0.05, 1.0, 10)))
            lv = np.sort(rng.uniform(0.1, 3.0, len(br)))[::-1]
            rep = verify_sum_identity(StepRearrangement(br, lv), alpha)
            assert rep.consistent
            ratios.append(rep.ratio)
        ratios = np.array(ratios)
        assert np.all(np.isfinite(ratios))
        assert ratios.max() / ratios.min() < 25


class TestAlphaVariants:
    def test_fk_alpha2_oracle(self):
        # f = 1, p = 2, alpha = 2: sup_t (1-t)^(1/2) / (1 - log t)
        gp = GrandParams(2.0, alpha=2.0)
        ts = np.linspace(1e-12, 1 - 1e-12, 1_000_001)
        oracle = float(np.max((1 - ts) ** 0.5 / (1 - np.log(ts))))
        assert grand_norm_fk(ONE, gp) == pytest.approx(oracle, abs=1e-3)

    def test_def_alpha2_endpoint(self):
        gp = GrandParams(2.0, alpha=2.0)
        assert grand_norm_def(ONE, gp) == pytest.approx(1.0, abs=4e-3)

    def test_window_uniform_per_alpha(self, rng):
        for alpha in (0.5, 2.0):
            gp = GrandParams(2.0, alpha=alpha)
            ratios = []
            for _ in range(8):
                br = np.unique(np.sort(rng.uniform(0.02, 1.0, 10)))
                lv = np.sort(rng.uniform(0.1, 3.0, len(br)))[::-1]
                f = StepRearrangement(br, lv)
                ratios.append(grand_norm_def(f, gp) / grand_norm_fk(f, gp))
            ratios = np.array(ratios)
            assert np.all(np.isfinite(ratios))
            assert ratios.max() / ratios.min() < 30

"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line
with the realized quantity, its pinned tolerance, and the runtime budget.

Criterion 6's F_(2,2) constant is asserted literally and marked as a
strict expected failure: the displayed constant is exceeded by the
canonical corpus (see the decisions ledger); the corrected constant is
asserted in the companion test.
"""

import math
import time

import numpy as np
import pytest

from kinterp.corpus import CorpusSpec, profile_corpus
from kinterp.extrapolate import (
    BASAUX_FLOOR,
    MatsaevSeqLattice,
    hardy_chain,
    inner_theta_norms,
    sample_profile,
)
from kinterp.grid import LogGrid, StepRearrangement
from kinterp.interpnorm import check_equivK, limit_theta0, lp_norm_K
from kinterp.kfunc import (
    DiscretePairElement,
    QuasiConcaveProfile,
    VectorValuedInstance,
    pisier_k,
    pisier_product_k,
)
from kinterp.lattice import F_bq, Linf_inv_t, apply_T, canonical_corpus, estimate_op_norm
from kinterp.grand import GrandParams, grand_norm_def, grand_norm_fk, k_side_llogl, llogl_alpha_norm
from kinterp.schatten import components, ideal_extrap, ideal_norm_via_F, schatten_norm, volterra
from kinterp.suites import SuiteOptions, run_suite

OPTS = SuiteOptions(no_timestamp=True)


class Budget:
    def __init__(self, seconds):
        self.limit = seconds
        self.t0 = time.perf_counter()

    @property
    def elapsed(self):
        return time.perf_counter() - self.t0

    def report(self, criterion, ok, detail):
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] criterion {criterion}: {detail} ({self.elapsed:.1f}s < {self.limit}s)")
        assert self.elapsed < self.limit, f"criterion {criterion} exceeded runtime budget"
        assert ok, f"criterion {criterion} failed: {detail}"


@pytest.fixture(scope="module")
def default_grid():
    return LogGrid(1e-12, 64)


@pytest.fixture(scope="module")
def baseq_report():
    t0 = time.perf_counter()
    rep = run_suite("baseq", OPTS)
    return rep, time.perf_counter() - t0


def test_criterion_01_wtilde_exactness():
    b = Budget(1.0)
    rep = run_suite("wtilde", OPTS)
    a = {x.name: x for x in rep.assertions}["w=1 exactness (rel err)"]
    b.report(1, rep.status == "PASS" and a.passed,
             f"w=1 transform max rel err {a.realized:.2e} <= 1e-6")


def test_criterion_02_normalization_calibration():
    b = Budget(1.0)
    prof = QuasiConcaveProfile(np.array([1.0]), np.array([1.0]))
    worst = max(
        abs(lp_norm_K(prof, theta, q, normalized=True, restricted=False) - 1.0)
        for theta in np.arange(0.1, 0.95, 0.1)
        for q in (1.0, 2.0, 5.0, math.inf)
    )
    b.report(2, worst <= 1e-6, f"normalized norm of min(t,1): worst |dev| {worst:.2e} <= 1e-6")


def test_criterion_03_equivK_chain():
    b = Budget(30.0)
    corpus = profile_corpus(CorpusSpec(seed=0, n_power=30, n_log_power=20, n_step=20, n_random=130))
    assert len(corpus) == 200
    violations = 0
    for _, prof in corpus:
        for theta in np.arange(0.1, 0.95, 0.1):
            for q in (1.0, 2.0, math.inf):
                violations += not check_equivK(prof, theta, q, slack=1e-3).ok
    b.report(3, violations == 0, f"200 profiles x 27 cells: {violations} violations of 1+((1-th)/th)^(1/q)")


def test_criterion_04_basaux_floor(default_grid):
    b = Budget(30.0)
    corpus = profile_corpus(CorpusSpec(seed=0))
    worst = math.inf
    for _, prof in corpus:
        kvals = sample_profile(prof, default_grid)
        for q in (1.0, math.inf):
            inner = inner_theta_norms(prof, default_grid, q)
            worst = min(worst, float(np.min(default_grid.nodes * inner - BASAUX_FLOOR * kvals)))
    b.report(4, worst >= -1e-9,
             f"t*norm - K/(2 sqrt e) node-min {worst:.2e} >= -1e-9 over {len(corpus)} profiles")


def test_criterion_05_baseq_two_sided(baseq_report):
    rep, elapsed = baseq_report
    b = Budget(120.0)
    b.t0 = time.perf_counter() - elapsed
    names = [
        "finite window F11:q1", "finite window FK:q1", "finite window L1:q1",
        "finite window F11:qinf", "finite window FK:qinf", "finite window L1:qinf",
        "min F11:q1 >= floor", "min FK:q1 >= floor", "min L1:q1 >= floor",
        "min F11:qinf >= floor", "min FK:qinf >= floor", "min L1:qinf >= floor",
        "negative control Linf FAILS (growth > 1.05)",
    ]
    by_name = {x.name: x for x in rep.assertions}
    parts = [by_name[n].passed for n in names]
    parts += [x.passed for x in rep.assertions if x.name.startswith("ppo-drift")]
    parts += [x.passed for x in rep.assertions if x.name.startswith("q-envelope")]
    growth = by_name["negative control Linf FAILS (growth > 1.05)"].realized
    b.report(5, all(parts),
             f"windows finite+floored, ppo drift < 5%, q-envelope <= 8, Linf control growth {growth:.3g}")


@pytest.fixture(scope="module")
def op_norm_corpus(default_grid):
    return canonical_corpus(default_grid, n_random=100, seed=0)


def test_criterion_06_t_norm_bounds(default_grid, op_norm_corpus):
    b = Budget(10.0)
    est0 = estimate_op_norm(apply_T, Linf_inv_t(), op_norm_corpus)
    ok = abs(est0 - 1.0) <= 1e-9
    details = [f"Linf(1/t): {est0:.12f}"]
    for bb, q in ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0)):
        est = estimate_op_norm(apply_T, F_bq(bb, q), op_norm_corpus)
        bound = 2.0 ** ((bb - 1.0) / q)
        ok = ok and est <= bound + 1e-6
        details.append(f"F({bb:g},{q:g}): {est:.4f}<={bound:.4f}")
    b.report(6, ok, "; ".join(details) + " [F(2,2) displayed constant: see companion xfail]")


@pytest.mark.xfail(strict=True, reason=(
    "spec/paper defect: the displayed T-bound 2^((b-1)/q) fails at (b,q)=(2,2); "
    "the substitution chain's actual constant is 2^(b-1/q) (verified independently "
    "with scipy quadrature; see the decisions ledger)"))
def test_criterion_06_f22_displayed_constant(default_grid, op_norm_corpus):
    est = estimate_op_norm(apply_T, F_bq(2.0, 2.0), op_norm_corpus)
    assert est <= 2.0 ** 0.5 + 1e-6


def test_criterion_06_f22_corrected_constant(default_grid, op_norm_corpus):
    b = Budget(10.0)
    est = estimate_op_norm(apply_T, F_bq(2.0, 2.0), op_norm_corpus)
    b.report("6 (corrected F22)", 2.0 ** 0.5 + 1e-6 < est <= 2.0 ** 1.5 + 1e-6,
             f"F(2,2) estimate {est:.4f} exceeds displayed 1.4142, within corrected 2.8284")


def test_criterion_07_fiorenza_karadzhov():
    b = Budget(60.0)
    rep = run_suite("fk", OPTS)
    one = StepRearrangement([1.0], [1.0])
    gp = GrandParams(2.0)
    vdef = grand_norm_def(one, gp)
    ts = np.linspace(1e-12, 1 - 1e-12, 2_000_001)
    oracle = float(np.max(((1 - ts) / (1 - np.log(ts))) ** 0.5))
    vfk = grand_norm_fk(one, gp)
    ok = (abs(vdef - 1.0) <= 2e-3 and abs(vfk - oracle) <= 1e-3 and rep.status == "PASS")
    b.report(7, ok, f"def {vdef:.5f}~1, fk {vfk:.5f}~{oracle:.5f}, corpus window drift < 5%")


def test_criterion_08_pisier_equality():
    b = Budget(10.0)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        natoms = int(rng.integers(1, 9))
        dens = []
        for _ in range(natoms):
            nsteps = int(rng.integers(1, 17))
            br = np.unique(np.sort(rng.uniform(0.05, 3.0, nsteps)))
            lv = np.sort(rng.uniform(0.01, 5.0, len(br)))[::-1]
            dens.append(StepRearrangement(br, lv))
        inst = VectorValuedInstance(rng.uniform(0.1, 2.0, natoms), dens)
        t = float(rng.uniform(0.01, 5.0))
        worst = max(worst, abs(pisier_k(t, inst) - pisier_product_k(t, inst))
                    / max(pisier_product_k(t, inst), 1e-300))
    single = VectorValuedInstance([1.0], [StepRearrangement([1.0], [1.0])])
    exact1 = max(abs(pisier_k(t, single) - min(t, 1.0)) for t in (0.3, 1.0, 2.0))
    pair = VectorValuedInstance([0.5, 0.5],
                                [StepRearrangement([1.0], [1.0]), StepRearrangement([1.0], [1.0])])
    exact2 = max(abs(pisier_k(t, pair) - min(t, 1.0)) for t in (0.25, 0.8))
    ok = worst <= 1e-6 and exact1 <= 1e-12 and exact2 <= 1e-12
    b.report(8, ok, f"100 instances worst rel gap {worst:.2e} <= 1e-6; analytic cases exact")


def test_criterion_09_hardy_chain():
    b = Budget(20.0)
    rng = np.random.default_rng(11)
    worst_lo = worst_hi = -math.inf
    for p in (1.5, 2.0, 4.0):
        for _ in range(100):
            a = DiscretePairElement(np.sort(rng.uniform(0, 1, 64))[::-1])
            lp, knorm = hardy_chain(a, p)
            worst_lo = max(worst_lo, (lp - knorm) / lp)
            worst_hi = max(worst_hi, (knorm - math.e * lp) / lp)
    ok = worst_lo <= 1e-3 and worst_hi <= 1e-3
    b.report(9, ok, f"lp <= norm <= e*lp over 300 cases; slacks {worst_lo:.2e}, {worst_hi:.2e}")


def test_criterion_10_matsaev_volterra():
    b = Budget(180.0)
    ok = True
    details = []
    for n in (64, 128):
        V = volterra(n)
        VR, VJ = components(V)
        ok = ok and abs(VR.s[0] - 0.5) <= 1e-10 and VR.s[1] <= 1e-10
        worst = 0.0
        for p in (1.1, 1.5, 2.0, 3.0):
            lhs = schatten_norm(VR, p)
            rhs = max(p / (p - 1.0), p) * schatten_norm(VJ, p)
            ok = ok and lhs <= rhs * (1 + 1e-9)
            worst = max(worst, lhs / rhs)
        details.append(f"n={n}: s1 dev {abs(VR.s[0]-0.5):.1e}, s2 {VR.s[1]:.1e}, worst lhs/rhs {worst:.3f}")
    b.report(10, ok, "; ".join(details))


def test_criterion_11_ideals_window():
    b = Budget(60.0)
    F_d = MatsaevSeqLattice(1.0)
    ok = True
    details = []
    for beta in (0.5, 1.0, 2.0):
        s = np.arange(1, 10**5 + 1, dtype=float) ** -beta
        r1 = ideal_extrap(s, F_d, 10**5) / ideal_norm_via_F(s, F_d, 10**5)
        r2 = ideal_extrap(s[: 5 * 10**4], F_d, 5 * 10**4) / ideal_norm_via_F(s[: 5 * 10**4], F_d, 5 * 10**4)
        drift = abs(r2 - r1) / r1
        ok = ok and np.isfinite(r1) and drift < 0.05
        details.append(f"beta={beta:g}: ratio {r1:.4f}, N->N/2 drift {drift:.2%}")
    b.report(11, ok, "; ".join(details))


def test_criterion_12_theta_limits():
    b = Budget(20.0)
    corpus = profile_corpus(CorpusSpec(seed=0, n_random=10))
    worst = 0.0
    ok = True
    for _, prof in corpus:
        for q in (1.0, 2.0):
            rep = limit_theta0(prof, q)
            worst = max(worst, rep.final_rel_dev)
            ok = ok and rep.ok
    b.report(12, ok and worst <= 0.01,
             f"theta=2^-14 value within {worst:.2%} of plateau over {len(corpus)} profiles x q in {{1,2}}")


def test_criterion_13_llogl_identity():
    b = Budget(30.0)
    one = StepRearrangement([1.0], [1.0])
    kv, _ = k_side_llogl(one, 1.0)
    lv, _ = llogl_alpha_norm(one, 1.0)
    rep = run_suite("llogl", OPTS)
    ok = abs(kv - 1.0) <= 1e-3 and abs(lv - 2.0) <= 1e-3 and rep.status == "PASS"
    b.report(13, ok, f"f=1: K-side {kv:.4f}=1, LLogL-side {lv:.4f}=2; corpus windows + joint flags OK")


def test_criterion_14_reiteration_windows():
    b = Budget(60.0)
    rep = run_suite("reiter", OPTS)
    drift_ok = all(x.passed for x in rep.assertions if "drift" in x.name)
    b.report(14, rep.status == "PASS" and drift_ok,
             f"L4/L2 window {rep.stats.get('window:L4/L2:F11')} stable; "
             f"limiting instance {rep.stats.get('window:limreit:L1')}")

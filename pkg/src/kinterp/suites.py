"""Verification suites: each one exercises a family of norm identities on
generated corpora and reports per-case statistics, explicit-constant
assertions and refinement drift.

Suite windows are compared against the checked-in baselines with 10%
tolerance so empirical two-sided constants are regression-guarded without
hard-coding unknown universal constants.
"""

from __future__ import annotations

import importlib.resources
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import extrapolate as ex
from . import grand as gr
from .corpus import (
    CorpusSpec,
    corpus_digest,
    profile_corpus,
    rearrangement_corpus,
    tall_step_extension,
)
from .grid import LogGrid, SampledFunction, StepRearrangement
from .interpnorm import check_equivK, limit_theta0, lp_norm_K
from .kfunc import (
    DiscretePairElement,
    QuasiConcaveProfile,
    pisier_k,
    pisier_product_k,
    VectorValuedInstance,
)
from .lattice import (
    F_bq,
    L1_dss,
    Linf_inv_t,
    Linf_plain,
    apply_T,
    canonical_corpus,
    estimate_op_norm,
    fk_lattice,
    lattice_norm,
    tilde_weight,
)
from .report import CaseRecord, VerificationReport
from .schatten import (
    components,
    ideal_extrap,
    ideal_norm_via_F,
    matsaev_extrap,
    matsaev_norm,
    schatten_norm,
    volterra,
    xlog_norm,
)

__all__ = ["SuiteOptions", "SUITES", "run_suite", "load_baselines"]

FLOOR = ex.BASAUX_FLOOR


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = 0
    t_min: float = 1e-12
    points_per_octave: int = 64
    workers: int = 1
    no_timestamp: bool = False
    check_baselines: bool = True
    baseq_lattice: str | None = None  # "Linf" selects the negative control

    def corpus_spec(self, **overrides) -> CorpusSpec:
        base = dict(seed=self.seed, t_min=self.t_min, points_per_octave=self.points_per_octave)
        base.update(overrides)
        return CorpusSpec(**base)

    def grid(self, ppo=None) -> LogGrid:
        return LogGrid(self.t_min, ppo or self.points_per_octave)


def load_baselines() -> dict:
    ref = importlib.resources.files("kinterp.data").joinpath("baselines.json")
    try:
        return json.loads(ref.read_text())
    except FileNotFoundError:
        return {}


def _check_window(rep: VerificationReport, key: str, window, baselines, tol=0.10):
    base = baselines.get(rep.suite, {}).get(key)
    rep.windows[key] = (float(window[0]), float(window[1]))
    rep.stats[f"window:{key}"] = f"[{window[0]:.6g}, {window[1]:.6g}]"
    if base is None:
        rep.notes.append(f"no baseline for {key}; window recorded")
        return
    for end, got, want in zip(("min", "max"), window, base):
        ok = abs(got - want) <= tol * abs(want) + 1e-12
        rep.check(f"baseline:{key}:{end}", want, got, ok)


def _pmap(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------


def run_wtilde(opts: SuiteOptions) -> VerificationReport:
    """Exact transform value for w = 1, the power-log window, and the
    narrow-bump limit."""
    t0 = time.perf_counter()
    rep = VerificationReport("wtilde", spec={"seed": opts.seed, "ppo": opts.points_per_octave})
    grid = opts.grid()
    ones = SampledFunction(grid, np.ones(grid.n_nodes), "ds/s")
    tw = tilde_weight(ones)
    expect = 1.0 - grid.log_nodes
    err = float(np.max(np.abs(tw.values - expect) / expect))
    rep.check("w=1 exactness (rel err)", 1e-6, err, err <= 1e-6)
    rep.stats["w1_max_rel_err"] = err

    walpha = SampledFunction(grid, (1.0 - grid.log_nodes), "ds/s")
    twa = tilde_weight(walpha)
    ratio = twa.values / (1.0 - grid.log_nodes) ** 2
    rep.check("w_alpha ratio >= 1/4", 0.25, float(ratio.min()), ratio.min() >= 0.25)
    rep.check("w_alpha ratio <= 4", 4.0, float(ratio.max()), ratio.max() <= 4.0)

    # narrow bump of mass m at s0: wtilde -> m * min(1, s0/t)
    k0 = grid.n_nodes // 3
    bump = np.zeros(grid.n_nodes)
    bump[k0] = 1.0 / grid.h  # unit mass against ds/s
    twb = tilde_weight(SampledFunction(grid, bump, "ds/s"))
    s0 = grid.nodes[k0]
    model = np.minimum(1.0, s0 / grid.nodes)
    errb = float(np.max(np.abs(twb.values - model)))
    rep.check("bump vs min(1,s0/t)", 0.02, errb, errb <= 0.02)
    return rep.finish(t0, opts.no_timestamp)


def run_equivk(opts: SuiteOptions) -> VerificationReport:
    """Calibration of the normalized norms and the restricted/full chain
    with its exact constant over the Conv0 corpus."""
    t0 = time.perf_counter()
    rep = VerificationReport("equivK", spec={"seed": opts.seed})
    prof1 = QuasiConcaveProfile(np.array([1.0]), np.array([1.0]))
    worst = 0.0
    for th in np.arange(0.1, 0.95, 0.1):
        for q in (1.0, 2.0, 5.0, math.inf):
            worst = max(worst, abs(lp_norm_K(prof1, th, q) - 1.0))
    rep.check("calibration |norm(min(t,1)) - 1|", 1e-6, worst, worst <= 1e-6)

    corpus = profile_corpus(opts.corpus_spec(n_power=30, n_log_power=20, n_step=20, n_random=130))
    thetas = np.arange(0.1, 0.95, 0.1)
    qs = (1.0, 2.0, math.inf)

    def cell_violations(item):
        cid, prof = item
        bad = 0
        worst_ratio = 0.0
        for th in thetas:
            for q in qs:
                r = check_equivK(prof, th, q)
                bad += not r.ok
                worst_ratio = max(worst_ratio, r.ratio / r.bound)
        return cid, bad, worst_ratio

    results = _pmap(cell_violations, corpus, opts.workers)
    total_bad = sum(b for _, b, _ in results)
    worst_ratio = max(w for _, _, w in results)
    rep.stats["profiles"] = len(corpus)
    rep.stats["cells"] = len(corpus) * len(thetas) * len(qs)
    rep.stats["worst ratio/bound"] = worst_ratio
    rep.check("equivK violations", 0, total_bad, total_bad == 0)
    for cid, bad, w in results:
        if bad:
            rep.cases.append(CaseRecord(cid, w, "VIOLATION"))
    return rep.finish(t0, opts.no_timestamp)


_BASEQ_LATTICES = {
    "F11": lambda: F_bq(1.0, 1.0),
    "FK": lambda: fk_lattice(2.0),
    "L1": lambda: L1_dss(),
}


def _baseq_windows(corpus, grid, q, lattices):
    """Shared-inner evaluation: one sweep per (profile, q), all lattices."""
    windows = {name: [] for name in lattices}
    floor_min = math.inf
    for cid, prof in corpus:
        kvals = ex.sample_profile(prof, grid)
        inner = ex.inner_theta_norms(prof, grid, q)
        floor_min = min(floor_min, float(np.min(grid.nodes * inner - FLOOR * kvals)))
        v = SampledFunction(grid, inner, "ds/s", t_power=1.0)
        kf = SampledFunction(grid, kvals, "ds/s")
        for name, F in lattices.items():
            nv = lattice_norm(v, F)
            dv = lattice_norm(kf, F)
            if nv.diverged != dv.diverged or dv.truncated_value <= 0:
                windows[name].append((cid, math.nan))
                continue
            windows[name].append((cid, nv.truncated_value / dv.truncated_value))
    return windows, floor_min


def run_baseq(opts: SuiteOptions) -> VerificationReport:
    """Extrapolation-functional equivalence: lower-bound floor, finite
    two-sided windows, refinement drift, q-envelope, the T-norm estimates
    and the L-infinity negative control."""
    t0 = time.perf_counter()
    rep = VerificationReport("baseq", spec={"seed": opts.seed, "ppo": opts.points_per_octave})
    baselines = load_baselines() if opts.check_baselines else {}
    grid = opts.grid()
    corpus = profile_corpus(opts.corpus_spec())
    if opts.baseq_lattice == "Linf":
        return _run_baseq_control(rep, corpus, grid, opts, t0)
    lattices = {name: mk() for name, mk in _BASEQ_LATTICES.items()}

    results = {}
    for q, qname in ((1.0, "q1"), (math.inf, "qinf")):
        windows, floor_min = _baseq_windows(corpus, grid, q, lattices)
        rep.check(f"floor({qname}) >= -1e-9", -1e-9, floor_min, floor_min >= -1e-9)
        for name, pairs in windows.items():
            ratios = np.array([r for _, r in pairs if not math.isnan(r)])
            key = f"{name}:{qname}"
            results[key] = (float(ratios.min()), float(ratios.max()))
            rep.stats[f"median:{key}"] = float(np.median(ratios))
            rep.check(f"finite window {key}", "finite", results[key][1], np.isfinite(results[key][1]))
            rep.check(f"min {key} >= floor", FLOOR - 1e-9, results[key][0],
                      results[key][0] >= FLOOR - 1e-9)
            _check_window(rep, key, results[key], baselines)

    # q-envelope: windows for q=1 and q=inf within the factor-8 envelope
    for name in lattices:
        for end in (0, 1):
            a = results[f"{name}:q1"][end]
            b = results[f"{name}:qinf"][end]
            f = max(a / b, b / a)
            rep.check(f"q-envelope {name} {'min' if end == 0 else 'max'}", 8.0, f, f <= 8.0)

    # refinement: double points_per_octave, same profiles
    grid2 = opts.grid(ppo=2 * opts.points_per_octave)
    for q, qname in ((1.0, "q1"), (math.inf, "qinf")):
        windows2, _ = _baseq_windows(corpus, grid2, q, lattices)
        for name, pairs in windows2.items():
            ratios = np.array([r for _, r in pairs if not math.isnan(r)])
            key = f"{name}:{qname}"
            for end, got in zip(("min", "max"), (float(ratios.min()), float(ratios.max()))):
                want = results[key][0 if end == "min" else 1]
                drift = abs(got - want) / want
                rep.check(f"ppo-drift {key} {end} < 5%", 0.05, drift, drift < 0.05)

    # per-t exponent q(t) = 2 log(e/t): the equivalence survives with a
    # continuous exponent map; window recorded and baseline-guarded
    wq, _ = _baseq_windows(corpus, grid, ex.q_of_t, {"FK": lattices["FK"]})
    ratios = np.array([r for _, r in wq["FK"] if not math.isnan(r)])
    _check_window(rep, "FK:qt", (float(ratios.min()), float(ratios.max())), baselines)
    rep.check("min FK:qt >= floor", FLOOR - 1e-9, float(ratios.min()),
              ratios.min() >= FLOOR - 1e-9)

    # negative control: F = Linf, tall-step corpus extension trend
    linf = {"Linf": Linf_plain()}
    w_base, _ = _baseq_windows(corpus, grid, math.inf, linf)
    w_ext, _ = _baseq_windows(corpus + tall_step_extension(8, opts.t_min), grid, math.inf, linf)
    base_max = np.nanmax([r for _, r in w_base["Linf"]])
    ext_max = np.nanmax([r for _, r in w_ext["Linf"]])
    growth = ext_max / base_max
    rep.stats["Linf control growth"] = growth
    rep.check("negative control Linf FAILS (growth > 1.05)", 1.05, growth, growth > 1.05)

    # T-norm estimates (exact on Linf(1/t), paper bounds on F_{b,q})
    can = canonical_corpus(grid, n_random=100, seed=opts.seed)
    est = estimate_op_norm(apply_T, Linf_inv_t(), can)
    rep.check("||T|| on Linf(1/t) == 1", 1.0, est, abs(est - 1.0) <= 1e-9)
    for b in (1.0, 2.0):
        for q in (1.0, 2.0):
            est = estimate_op_norm(apply_T, F_bq(b, q), can)
            bound = 2.0 ** ((b - 1.0) / q)
            corrected = 2.0 ** (b - 1.0 / q)
            if (b, q) == (2.0, 2.0):
                # the displayed constant is an algebra slip at q > 1: the
                # substitution chain yields 2^(b-1/q), and the corpus
                # genuinely exceeds the displayed value.  Pin the finding.
                rep.check(
                    "||T|| on F_(2,2): displayed 2^((b-1)/q) exceeded, corrected 2^(b-1/q) holds",
                    f"({bound:.6g}, {corrected:.6g}]",
                    est,
                    bound + 1e-6 < est <= corrected + 1e-6,
                )
                rep.notes.append(
                    "F_(2,2): the displayed constant 2^((b-1)/q) is exceeded (documented "
                    "slip; the change-of-variables chain gives 2^(b-1/q), which holds)"
                )
            else:
                rep.check(f"||T|| on F_({b:g},{q:g}) <= 2^((b-1)/q)", bound, est, est <= bound + 1e-6)
    rep.stats["corpus_digest"] = corpus_digest(opts.corpus_spec())[:16]
    return rep.finish(t0, opts.no_timestamp)


def _run_baseq_control(rep, corpus, grid, opts, t0):
    """The F = L-infinity case: the equivalence is expected to break, so
    the suite reports FAIL when (and only when) the corpus-extension trend
    shows the unbounded ratio growth."""
    linf = {"Linf": Linf_plain()}
    w_base, _ = _baseq_windows(corpus, grid, math.inf, linf)
    w_ext, _ = _baseq_windows(corpus + tall_step_extension(8, opts.t_min), grid, math.inf, linf)
    base_max = float(np.nanmax([r for _, r in w_base["Linf"]]))
    ext_max = float(np.nanmax([r for _, r in w_ext["Linf"]]))
    growth = ext_max / base_max
    rep.stats["window max (corpus)"] = base_max
    rep.stats["window max (extended)"] = ext_max
    rep.stats["growth"] = growth
    # reproducers: the extension members driving the blow-up
    for cid, r in w_ext["Linf"]:
        if cid.startswith("tall-step") and np.isfinite(r):
            rep.cases.append(CaseRecord(cid, r, "CONTROL"))
    rep.notes.append("F = Linf negative control: unbounded ratio trend expected")
    rep.check("equivalence window stable under corpus extension", 1.05, growth, growth <= 1.05)
    return rep.finish(t0, opts.no_timestamp)


def run_fk(opts: SuiteOptions) -> VerificationReport:
    """Grand-norm oracles at f = 1 and the definition/rearrangement window
    over the corpus, with epsilon/t grid refinement stability."""
    t0 = time.perf_counter()
    rep = VerificationReport("fk", spec={"seed": opts.seed})
    baselines = load_baselines() if opts.check_baselines else {}
    one = StepRearrangement([1.0], [1.0])
    gp = gr.GrandParams(2.0)
    vdef = gr.grand_norm_def(one, gp)
    rep.check("def norm f=1 p=2 == 1", 2e-3, abs(vdef - 1.0), abs(vdef - 1.0) <= 2e-3)
    # 1-d oracle for the rearrangement side: max of ((1-t)/(1-log t))^(1/2)
    ts = np.linspace(1e-12, 1.0 - 1e-12, 2_000_001)
    oracle = float(np.max(((1.0 - ts) / (1.0 - np.log(ts))) ** 0.5))
    vfk = gr.grand_norm_fk(one, gp)
    rep.check("fk norm f=1 p=2 vs oracle", 1e-3, abs(vfk - oracle), abs(vfk - oracle) <= 1e-3)

    corpus = rearrangement_corpus(opts.corpus_spec())
    def ratio_of(item):
        cid, fs = item
        d = gr.grand_norm_def(fs, gp)
        f = gr.grand_norm_fk(fs, gp)
        return cid, (d / f if f > 0 else math.nan)
    pairs = _pmap(ratio_of, corpus, opts.workers)
    ratios = np.array([r for _, r in pairs if np.isfinite(r)])
    window = (float(ratios.min()), float(ratios.max()))
    _check_window(rep, "def/fk", window, baselines)
    rep.stats["n_corpus"] = len(corpus)

    # refinement: denser eps and t grids
    gp2 = gr.GrandParams(2.0, n_eps=1024)
    def ratio2(item):
        cid, fs = item
        d = gr.grand_norm_def(fs, gp2)
        f = gr.grand_norm_fk(fs, gp2, n_t=4096)
        return d / f if f > 0 else math.nan
    r2 = np.array([x for x in _pmap(ratio2, corpus, opts.workers) if np.isfinite(x)])
    for end, got, want in zip(("min", "max"), (r2.min(), r2.max()), window):
        drift = abs(got - want) / want
        rep.check(f"fk window drift {end} < 5%", 0.05, drift, drift < 0.05)
    return rep.finish(t0, opts.no_timestamp)


def run_pisier(opts: SuiteOptions) -> VerificationReport:
    """Water-filling against the product rearrangement route: equality on
    random instances and exactness on the analytic ones."""
    t0 = time.perf_counter()
    rep = VerificationReport("pisier", spec={"seed": opts.seed})
    rng = np.random.default_rng(opts.seed if opts.seed else 7)
    worst = 0.0
    for trial in range(100):
        natoms = int(rng.integers(1, 9))
        dens = []
        for _ in range(natoms):
            nsteps = int(rng.integers(1, 17))
            br = np.unique(np.sort(rng.uniform(0.05, 3.0, nsteps)))
            lv = np.sort(rng.uniform(0.01, 5.0, len(br)))[::-1]
            dens.append(StepRearrangement(br, lv))
        inst = VectorValuedInstance(rng.uniform(0.1, 2.0, natoms), dens)
        t = float(rng.uniform(0.01, 5.0))
        wv = pisier_k(t, inst)
        pv = pisier_product_k(t, inst)
        rel = abs(wv - pv) / max(pv, 1e-300)
        worst = max(worst, rel)
        if rel > 1e-6:
            rep.cases.append(CaseRecord(f"random:{trial}", rel, "MISMATCH"))
    rep.stats["worst_rel_gap"] = worst
    rep.check("waterfill == product (rel)", 1e-6, worst, worst <= 1e-6)

    single = VectorValuedInstance([1.0], [StepRearrangement([0.5, 1.5], [2.0, 0.5])])
    worst1 = max(
        abs(pisier_k(t, single) - single.densities[0].integral(min(t, 1.5)))
        for t in (0.1, 0.4, 1.0, 2.0, 5.0)
    )
    rep.check("single atom exact", 1e-12, worst1, worst1 <= 1e-12)
    pair = VectorValuedInstance(
        [0.5, 0.5], [StepRearrangement([1.0], [1.0]), StepRearrangement([1.0], [1.0])]
    )
    worst2 = max(abs(pisier_k(t, pair) - min(t, 1.0)) for t in (0.2, 0.7, 1.0))
    rep.check("identical pair exact", 1e-12, worst2, worst2 <= 1e-12)
    return rep.finish(t0, opts.no_timestamp)


def run_limits(opts: SuiteOptions) -> VerificationReport:
    """theta -> 0 ladder of normalized full-domain norms against the
    plateau, on ordered corpus profiles."""
    t0 = time.perf_counter()
    rep = VerificationReport("limits", spec={"seed": opts.seed})
    corpus = profile_corpus(opts.corpus_spec(n_random=10))
    worst = 0.0
    bad = 0
    def run_one(item):
        cid, prof = item
        out = []
        for q in (1.0, 2.0):
            out.append((q, limit_theta0(prof, q)))
        return cid, out
    for cid, reports in _pmap(run_one, corpus, opts.workers):
        for q, lr in reports:
            worst = max(worst, lr.final_rel_dev)
            if not lr.ok:
                bad += 1
                rep.cases.append(CaseRecord(f"{cid}:q{q:g}", lr.final_rel_dev, "FAIL"))
    rep.stats["profiles"] = len(corpus)
    rep.stats["worst final deviation"] = worst
    rep.check("theta-ladder deviation at 2^-14 <= 1%", 0.01, worst, worst <= 0.01)
    rep.check("ladder failures", 0, bad, bad == 0)
    return rep.finish(t0, opts.no_timestamp)


def run_llogl(opts: SuiteOptions) -> VerificationReport:
    """L(LogL)-type identity: closed forms at f = 1, two-sided windows per
    alpha under both log conventions, and joint divergence flags."""
    t0 = time.perf_counter()
    rep = VerificationReport("llogl", spec={"seed": opts.seed})
    baselines = load_baselines() if opts.check_baselines else {}
    one = StepRearrangement([1.0], [1.0])
    lv, _ = gr.llogl_alpha_norm(one, 1.0)
    kv, _ = gr.k_side_llogl(one, 1.0)
    rep.check("f=1: llogl side == 2", 1e-3, abs(lv - 2.0), abs(lv - 2.0) <= 1e-3)
    rep.check("f=1: K side == 1", 1e-3, abs(kv - 1.0), abs(kv - 1.0) <= 1e-3)

    corpus = rearrangement_corpus(opts.corpus_spec())
    for alpha in (0.5, 1.0, 2.0):
        ratios = []
        ratios_plain = []  # bare log(1/s) convention of the display
        inconsistent = 0
        for cid, fs in corpus:
            r = gr.verify_sum_identity(fs, alpha)
            if not r.consistent:
                inconsistent += 1
                rep.cases.append(CaseRecord(f"{cid}:a{alpha:g}", math.nan, "FLAG-MISMATCH"))
            if not (r.k_diverged or r.llogl_diverged):
                ratios.append(r.ratio)
            rp = gr.verify_sum_identity(fs, alpha, shift=0.0)
            if not (rp.k_diverged or rp.llogl_diverged) and np.isfinite(rp.ratio):
                ratios_plain.append(rp.ratio)
        arr = np.array(ratios)
        window = (float(arr.min()), float(arr.max()))
        _check_window(rep, f"alpha:{alpha:g}", window, baselines)
        arrp = np.array(ratios_plain)
        _check_window(rep, f"alpha:{alpha:g}:plain-log", (float(arrp.min()), float(arrp.max())),
                      baselines)
        rep.check(f"flags consistent (alpha={alpha:g})", 0, inconsistent, inconsistent == 0)

    # divergent representative: both sides flagged together
    grid = opts.grid()
    br = grid.nodes[::-1].copy()
    vals = 1.0 / (br * (1.0 - np.log(br)) ** 2)
    vals = np.maximum.accumulate(vals[::-1])[::-1]
    r = gr.verify_sum_identity(StepRearrangement(br, vals), 1.0)
    rep.check("divergent input flags both sides", True,
              f"{r.llogl_diverged}/{r.k_diverged}", r.llogl_diverged and r.k_diverged)
    return rep.finish(t0, opts.no_timestamp)


def run_reiter(opts: SuiteOptions) -> VerificationReport:
    """Reiteration instances: the (L4 vs L2, Linf) window in F_{1,1}, the
    limiting instance with G = L1(ds/s), and the Holmstedt surrogate."""
    t0 = time.perf_counter()
    rep = VerificationReport("reiter", spec={"seed": opts.seed, "ppo": opts.points_per_octave})
    baselines = load_baselines() if opts.check_baselines else {}
    grid = opts.grid()
    corpus = rearrangement_corpus(opts.corpus_spec())
    F = F_bq(1.0, 1.0)
    G = L1_dss()

    def lp_profile_norm(fs, p, g):
        cut = np.minimum(g.nodes**p, fs.breaks[-1])
        kv = fs.integral_batch(cut, power=p) ** (1.0 / p)
        return lattice_norm(SampledFunction(g, kv, "ds/s"), F)

    ratios42 = []
    for cid, fs in corpus:
        n4 = lp_profile_norm(fs, 4.0, grid)
        n2 = lp_profile_norm(fs, 2.0, grid)
        if n4.diverged != n2.diverged or n2.truncated_value <= 0:
            continue
        ratios42.append(n4.truncated_value / n2.truncated_value)
    arr = np.array(ratios42)
    window42 = (float(arr.min()), float(arr.max()))
    _check_window(rep, "L4/L2:F11", window42, baselines)

    # refinement stability of the (iv) instance
    grid2 = opts.grid(ppo=2 * opts.points_per_octave)
    ratios42b = []
    for cid, fs in corpus:
        n4 = lp_profile_norm(fs, 4.0, grid2)
        n2 = lp_profile_norm(fs, 2.0, grid2)
        if n4.diverged != n2.diverged or n2.truncated_value <= 0:
            continue
        ratios42b.append(n4.truncated_value / n2.truncated_value)
    arr2 = np.array(ratios42b)
    for end, got, want in zip(("min", "max"), (arr2.min(), arr2.max()), window42):
        drift = abs(got - want) / want
        rep.check(f"L4/L2 drift {end} < 5%", 0.05, drift, drift < 0.05)

    # limiting reiteration with G = L1(ds/s) on profile corpus
    profs = profile_corpus(opts.corpus_spec(n_random=8))
    ratios_lim = []
    dom_bad = 0
    for cid, prof in profs:
        sn, kn, sur = ex.limiting_reiteration_surrogate(prof, 0.5, G, grid)
        if kn.value <= 0 or not np.isfinite(kn.value):
            continue
        ratios_lim.append(sn.value / kn.value)
        kq = prof(np.clip(grid.nodes**2, 1e-300, 1.0))
        if np.min(sur - kq) < -1e-9 * max(prof.plateau, 1e-300):
            dom_bad += 1
    arrl = np.array(ratios_lim)
    _check_window(rep, "limreit:L1", (float(arrl.min()), float(arrl.max())), baselines)
    rep.check("surrogate dominates K(t^2)", 0, dom_bad, dom_bad == 0)

    # Holmstedt surrogate two-sided window at theta = 1/2 in F_{1,1}
    ratios_h = []
    for cid, prof in profs:
        hn, kn, _ = ex.reiteration_upper(prof, 0.5, F, grid)
        if kn.truncated_value <= 0:
            continue
        ratios_h.append(hn.truncated_value / kn.truncated_value)
    arrh = np.array(ratios_h)
    _check_window(rep, "holmstedt:0.5:F11", (float(arrh.min()), float(arrh.max())), baselines)
    return rep.finish(t0, opts.no_timestamp)


def run_matsaev(opts: SuiteOptions) -> VerificationReport:
    """Schatten-side checks: Volterra component inequality, the ideal /
    extrapolation windows at N and N/2, the Hardy chain, the S_d transfer
    and the end-to-end component bound."""
    t0 = time.perf_counter()
    rep = VerificationReport("matsaev", spec={"seed": opts.seed})
    baselines = load_baselines() if opts.check_baselines else {}

    # Volterra discretization identities and the component inequality
    for n in (64, 128):
        V = volterra(n)
        VR, VJ = components(V)
        rep.check(f"s1(V_R) == 1/2 (n={n})", 1e-10, abs(VR.s[0] - 0.5), abs(VR.s[0] - 0.5) <= 1e-10)
        rep.check(f"s2(V_R) <= 1e-10 (n={n})", 1e-10, VR.s[1], VR.s[1] <= 1e-10)
        for p in (1.1, 1.5, 2.0, 3.0):
            lhs = schatten_norm(VR, p)
            rhs = max(p / (p - 1.0), p) * schatten_norm(VJ, p)
            rep.check(f"component bound n={n} p={p}", rhs, lhs, lhs <= rhs * (1 + 1e-9))

    # Theorem-style window: diagonal j^-beta, alpha=1 lattice, N vs N/2
    F_d = ex.MatsaevSeqLattice(1.0)
    for beta in (0.5, 1.0, 2.0):
        s = np.arange(1, 10**5 + 1, dtype=float) ** -beta
        kn = ideal_norm_via_F(s, F_d, 10**5)
        ln = ideal_extrap(s, F_d, 10**5)
        ratio = ln / kn
        kn2 = ideal_norm_via_F(s[: 5 * 10**4], F_d, 5 * 10**4)
        ln2 = ideal_extrap(s[: 5 * 10**4], F_d, 5 * 10**4)
        drift = abs(ln2 / kn2 - ratio) / ratio
        rep.stats[f"ideals ratio beta={beta:g}"] = ratio
        rep.check(f"ideals drift beta={beta:g} < 5%", 0.05, drift, drift < 0.05)
        _check_window(rep, f"ideals:{beta:g}", (ratio, ratio), baselines)

    # Matsaev norm vs its (p-1)-extrapolation on random diagonals
    rng = np.random.default_rng(opts.seed + 17)
    ratios = []
    for _ in range(12):
        s = np.sort(rng.uniform(0, 1, 400))[::-1]
        ratios.append(matsaev_extrap(s, 1.0, 2.0) / matsaev_norm(s, 1.0))
    arr = np.array(ratios)
    _check_window(rep, "matsaev-extrap", (float(arr.min()), float(arr.max())), baselines)

    # Hardy chain (100 random sequences x p)
    worst_lo, worst_hi = 0.0, 0.0
    for p in (1.5, 2.0, 4.0):
        for _ in range(100):
            a = DiscretePairElement(np.sort(rng.uniform(0, 1, 64))[::-1])
            lp, knorm = ex.hardy_chain(a, p)
            worst_lo = max(worst_lo, (lp - knorm) / lp)
            worst_hi = max(worst_hi, (knorm - math.e * lp) / lp)
    rep.check("hardy lower (lp <= norm)", 1e-3, worst_lo, worst_lo <= 1e-3)
    rep.check("hardy upper (norm <= e lp)", 1e-3, worst_hi, worst_hi <= 1e-3)

    # S_d boundedness transfer with the proof's constant 2
    n_base = 316
    aseq = np.cumsum(1.0 / np.arange(1, n_base**2 + 1))
    ns = np.arange(1, n_base + 1)
    lhs = np.max(aseq[ns**2 - 1] / (1.0 + np.log(ns)))
    rhs = np.max(aseq / (1.0 + np.log(np.arange(1, n_base**2 + 1))))
    rep.check("S_d transfer <= 2x", 2.0 * rhs, lhs, lhs <= 2.0 * rhs + 1e-12)

    # end-to-end component bound in the alpha=1 lattice
    V = volterra(128)
    VR, VJ = components(V)
    lhs = xlog_norm(VR, F_d)
    rhs = ideal_norm_via_F(VJ, F_d)
    rep.stats["end-to-end C'"] = lhs / rhs
    rep.check("xlog(V_R) <= C' * ideal(V_J), C' <= 4", 4.0, lhs / rhs, lhs / rhs <= 4.0)
    return rep.finish(t0, opts.no_timestamp)


SUITES = {
    "wtilde": run_wtilde,
    "equivK": run_equivk,
    "baseq": run_baseq,
    "fk": run_fk,
    "pisier": run_pisier,
    "limits": run_limits,
    "llogl": run_llogl,
    "reiter": run_reiter,
    "matsaev": run_matsaev,
}


def run_suite(name: str, opts: SuiteOptions | None = None) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")
    return SUITES[name](opts or SuiteOptions())

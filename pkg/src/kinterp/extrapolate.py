"""Extrapolation functionals: parameter maps, the t * ||a||_{theta(t),q}
functional and its comparison against plain lattice K-norms, sequence-space
extrapolation, and reiteration surrogates.

The per-node inner norms delegate to the compiled/fallback sweep kernel;
everything here works on profiles realized over a shared LogGrid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import theta_sweep
from .grid import LogGrid, SampledFunction
from .interpnorm import norm_constant, phi_concave_pw
from .kfunc import DiscretePairElement, QuasiConcaveProfile
from .lattice import LatticeParam, NormValue, lattice_norm

__all__ = [
    "theta_of_t",
    "xi_of_t",
    "eta_of_t",
    "q_of_t",
    "p_of_n",
    "sample_profile",
    "inner_theta_norms",
    "extrap_norm_K",
    "profile_lattice_norm",
    "verify_baseq",
    "BaseqCase",
    "BaseqReport",
    "MatsaevSeqLattice",
    "lp_norm_seq",
    "seq_extrap_norm",
    "hardy_chain",
    "reiteration_upper",
    "limiting_reiteration_surrogate",
]

BASAUX_FLOOR = 0.5 / math.sqrt(math.e)


# ---------------------------------------------------------------------------
# parameter maps

def theta_of_t(t):
    """theta(t) = 1 + 1/(2 log(t/e)) on (0,1]; range [1/2, 1)."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > 1):
        raise ValueError("theta(t) is defined on (0, 1]")
    return 1.0 + 1.0 / (2.0 * (np.log(t) - 1.0))


def xi_of_t(t):
    """xi(t) = 1/(2 log(e/t)) on (0,1]; range (0, 1/2]."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > 1):
        raise ValueError("xi(t) is defined on (0, 1]")
    return 1.0 / (2.0 * (1.0 - np.log(t)))


def eta_of_t(t):
    """eta(t) = 1/(2 log(e t)) on [1, inf); range (0, 1/2]."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 1):
        raise ValueError("eta(t) is defined on [1, inf)")
    return 1.0 / (2.0 * (1.0 + np.log(t)))


def q_of_t(t):
    """q(t) = 2 log(e/t) on (0,1]; q(1) = 2, increasing toward 0."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t > 1):
        raise ValueError("q(t) is defined on (0, 1]")
    return 2.0 * (1.0 - np.log(t))


def p_of_n(n):
    """p(n) = 2 log(en) / (2 log(en) - 1); p(1) = 2, decreasing to 1."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 1):
        raise ValueError("p(n) is defined for n >= 1")
    L = 2.0 * (1.0 + np.log(n))
    return L / (L - 1.0)


# ---------------------------------------------------------------------------
# the extrapolation functional

def sample_profile(profile: QuasiConcaveProfile, grid: LogGrid) -> np.ndarray:
    """Profile values at the grid nodes (node order, t decreasing)."""
    return np.asarray(profile(grid.nodes), dtype=float)


def inner_theta_norms(profile: QuasiConcaveProfile, grid: LogGrid, q) -> np.ndarray:
    """Normalized restricted norms at (theta(t_i), q) for every node.

    ``q`` may be a float (delegated to the sweep kernel) or a callable
    t -> q(t) evaluated per node (numpy path, chunked).
    """
    u = -grid.log_nodes
    kvals = sample_profile(profile, grid)
    thetas = theta_of_t(grid.nodes)
    if callable(q):
        qs = np.asarray(q(grid.nodes), dtype=float)
        return _varq_sweep(u, kvals, thetas, qs)
    return np.asarray(theta_sweep(u, kvals, thetas, float(q)))


def _varq_sweep(u, kvals, thetas, qs, chunk: int = 64):
    n = len(u)
    w = np.empty(n)
    w[1:-1] = 0.5 * (u[2:] - u[:-2])
    w[0] = 0.5 * (u[1] - u[0])
    w[-1] = 0.5 * (u[-1] - u[-2])
    with np.errstate(divide="ignore"):
        logk = np.where(kvals > 0, np.log(kvals), -np.inf)
    out = np.empty(n)
    for a in range(0, n, chunk):
        th = thetas[a : a + chunk, None]
        qq = qs[a : a + chunk, None]
        x = qq * (th * u[None, :] + logk[None, :])
        m = np.max(x, axis=1, keepdims=True)
        s = np.sum(w[None, :] * np.exp(x - m), axis=1)
        # linear continuation below the grid floor, closed form
        tail = np.exp(qq[:, 0] * (thetas[a : a + chunk] * u[-1] + logk[-1]) - m[:, 0]) / (
            (1.0 - thetas[a : a + chunk]) * qq[:, 0]
        )
        c = (qq[:, 0] * thetas[a : a + chunk] * (1.0 - thetas[a : a + chunk])) ** (1.0 / qq[:, 0])
        out[a : a + chunk] = c * np.exp((m[:, 0] + np.log(s + tail)) / qq[:, 0])
    return out


def extrap_norm_K(profile: QuasiConcaveProfile, F: LatticeParam, q, grid: LogGrid):
    """|| t * ||a||_{theta(t),q}^{K,restricted,normalized} ||_F.

    Returns (NormValue, inner) where inner holds the per-node normalized
    restricted norms; the functional itself is the lattice norm of
    t * inner(t), with the factor t carried symbolically.
    """
    inner = inner_theta_norms(profile, grid, q)
    v = SampledFunction(grid, inner, "ds/s", t_power=1.0)
    return lattice_norm(v, F), inner


def profile_lattice_norm(profile: QuasiConcaveProfile, F: LatticeParam, grid: LogGrid) -> NormValue:
    """|| K(t) ||_F for a profile realized on the grid."""
    return lattice_norm(SampledFunction(grid, sample_profile(profile, grid), "ds/s"), F)


@dataclass(frozen=True)
class BaseqCase:
    case_id: str
    ratio: float
    extrap: float
    base: float
    floor_margin: float
    excluded: bool = False
    cause: str = ""


@dataclass(frozen=True)
class BaseqReport:
    lattice: str
    q: float | str
    cases: list
    ratio_min: float
    ratio_median: float
    ratio_max: float
    floor_min: float
    n_excluded: int
    floor_ok: bool

    @property
    def window(self):
        return (self.ratio_min, self.ratio_max)


def verify_baseq(corpus, F: LatticeParam, q, grid: LogGrid, floor_tol: float = 1e-9) -> BaseqReport:
    """Per-profile ratio of the extrapolation functional to the K-norm.

    Profiles where exactly one side diverges are excluded with cause; when
    both sides diverge at the grid floor the truncated values are compared
    (the floor is fixed, so the ratio remains a meaningful regularized
    comparison).  ``floor_margin`` is the node-wise minimum of
    t*inner(t) - K(t)/(2 sqrt(e)), which the lower bound keeps >= -tol.
    """
    cases = []
    ratios = []
    floor_min = math.inf
    for case_id, profile in corpus:
        kvals = sample_profile(profile, grid)
        ev, inner = extrap_norm_K(profile, F, q, grid)
        bv = profile_lattice_norm(profile, F, grid)
        margin = float(np.min(grid.nodes * inner - BASAUX_FLOOR * kvals))
        if ev.diverged != bv.diverged:
            cases.append(BaseqCase(case_id, math.nan, ev.value, bv.value, margin, True,
                                   "one-sided divergence"))
            continue
        num = ev.truncated_value if ev.diverged else ev.value
        den = bv.truncated_value if bv.diverged else bv.value
        if den <= 0:
            cases.append(BaseqCase(case_id, math.nan, num, den, margin, True, "zero base norm"))
            continue
        r = num / den
        ratios.append(r)
        floor_min = min(floor_min, margin)
        cases.append(BaseqCase(case_id, r, num, den, margin))
    if not ratios:
        return BaseqReport(str(F), _qname(q), cases, math.nan, math.nan, math.nan,
                           floor_min, len(cases), False)
    arr = np.array(ratios)
    return BaseqReport(
        str(F), _qname(q), cases,
        float(arr.min()), float(np.median(arr)), float(arr.max()),
        floor_min, sum(c.excluded for c in cases),
        bool(floor_min >= -floor_tol),
    )


def _qname(q):
    return "q(t)" if callable(q) else ("inf" if math.isinf(q) else q)


# ---------------------------------------------------------------------------
# sequence-space extrapolation

class MatsaevSeqLattice:
    """sup_n b_n / log(en)**alpha over 1 <= n <= length of the sequence."""

    def __init__(self, alpha: float = 1.0):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = alpha

    def norm(self, values, ns=None) -> float:
        values = np.asarray(values, dtype=float)
        ns = np.arange(1, len(values) + 1) if ns is None else np.asarray(ns, dtype=float)
        return float(np.max(values / (1.0 + np.log(ns)) ** self.alpha))

    def __repr__(self):
        return f"MatsaevSeqLattice(alpha={self.alpha})"


def lp_norm_seq(a: DiscretePairElement, p: float) -> float:
    if math.isinf(p):
        return float(a.astar[0])
    if p < 1:
        raise ValueError("p must be >= 1")
    return float(np.sum(a.astar**p) ** (1.0 / p))


def _geometric_ns(n_max: int, dense_upto: int = 64, count: int = 512) -> np.ndarray:
    ns = np.unique(np.concatenate([
        np.arange(1, min(dense_upto, n_max) + 1),
        np.unique(np.geomspace(1, n_max, count).astype(np.int64)),
    ]))
    return ns[ns <= n_max]


@dataclass(frozen=True)
class SeqExtrapReport:
    k_side: float
    lp_side: float
    ratio: float
    n_max: int
    tail_warning: bool


def seq_extrap_norm(a: DiscretePairElement, F_d: MatsaevSeqLattice, n_max: int = 10**5) -> SeqExtrapReport:
    """|| {||a||_{l^{p(n)}}} ||_{F_d} against || {K(n,a)} ||_{F_d}.

    The K-side partial sums are exact for every n; the lp-side sup is
    taken over all n <= 64 plus a geometric subgrid (lower bound of the
    true sup, stable under halving n_max).  A tail warning is raised when
    the K-side sup sits at the truncation edge.
    """
    s = a.astar
    m = len(s)
    n_eff = max(n_max, m)
    csum = np.cumsum(s)
    ns_k = _geometric_ns(n_eff)
    ksums = csum[np.minimum(ns_k, m) - 1]
    k_side = F_d.norm(ksums, ns_k)
    argmax_edge = bool(ksums[-1] / (1 + np.log(ns_k[-1])) ** F_d.alpha >= 0.999 * k_side)

    ns_l = _geometric_ns(n_eff)
    ps = p_of_n(ns_l)
    lp_vals = np.array([np.sum(s ** p) ** (1.0 / p) for p in ps])
    lp_side = F_d.norm(lp_vals, ns_l)
    return SeqExtrapReport(k_side, lp_side, lp_side / k_side, n_eff, argmax_edge)


def hardy_chain(a: DiscretePairElement, p: float):
    """(||a||_p, the normalized continuous-K interpolation norm) pair.

    The profile is the concave piecewise-linear extension of the partial
    sums on (0, n] with plateau at the total; theta = 1 - 1/p, q = p, full
    domain.  The chain asserts lp <= norm <= e * lp.
    """
    if not 1 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    s = a.astar
    n = len(s)
    bp = np.arange(1, n + 1, dtype=float)
    vals = np.cumsum(s)
    keep = np.concatenate(([True], np.diff(vals) > 0))
    prof = QuasiConcaveProfile(bp[keep], vals[keep], plateau=float(vals[-1]), validate=False)
    theta = 1.0 - 1.0 / p
    phi = phi_concave_pw(prof, theta, p, upper=float(bp[keep][-1]), plateau_tail=True)
    return lp_norm_seq(a, p), norm_constant(theta, p) * phi


# ---------------------------------------------------------------------------
# reiteration surrogates

def reiteration_upper(profile: QuasiConcaveProfile, theta: float, F: LatticeParam, grid: LogGrid):
    """Holmstedt surrogate H(t) = int_0^{t^{1/(1-theta)}} s^-theta K ds/s.

    Returns (||H||_F, ||K||_F, H as node array).  The prefix integrals are
    trapezoid sums in the log variable plus the closed-form continuation
    of the linear profile piece below the grid floor.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0,1)")
    u = -grid.log_nodes
    kvals = sample_profile(profile, grid)
    integrand = np.exp(theta * u) * kvals
    n = grid.n_nodes
    # suffix trapezoid: P[i] = int over (t_i, 1]? we need prefix from 0
    # build cumulative from the deep end: I(x) = int_0^x s^-theta K ds/s
    # nodes descending in t: index N = t_min .. index 0 = 1
    h = grid.h
    cum = np.zeros(n)
    # subgrid closed form: beta = K(t_N)/t_N, int_0^{t_N} s^{1-theta} beta ds/s
    beta_term = kvals[-1] * np.exp(theta * u[-1]) / (1.0 - theta)
    cum[-1] = beta_term
    incr = 0.5 * h * (integrand[:-1] + integrand[1:])
    cum[:-1] = beta_term + np.cumsum(incr[::-1])[::-1]
    # H at node i: evaluate cum at x = t_i ** (1/(1-theta)) by log-linear interp
    xi = u / (1.0 - theta)  # -log x
    idx = np.clip(xi / h, 0, n - 1)
    lo = np.floor(idx).astype(int)
    hi = np.minimum(lo + 1, n - 1)
    frac = idx - lo
    H = (1 - frac) * cum[lo] + frac * cum[hi]
    deep = xi > u[-1]
    H[deep] = kvals[-1] * np.exp((theta - 1.0) * (xi[deep] - u[-1]) + theta * u[-1]) / (1.0 - theta)
    hn = lattice_norm(SampledFunction(grid, H, "ds/s"), F)
    kn = profile_lattice_norm(profile, F, grid)
    return hn, kn, H


def limiting_reiteration_surrogate(profile: QuasiConcaveProfile, theta: float, G: LatticeParam,
                                   grid: LogGrid):
    """Surrogate K(t, f; A0, (A)_{theta,inf}) ~ t sup_{t^{1/theta}<=s<=1} s^-theta K(s).

    Returns (||surrogate||_G, ||K||_G, surrogate nodes array).  The
    surrogate dominates K(t^{1/theta}) pointwise by construction.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0,1)")
    u = -grid.log_nodes
    kvals = sample_profile(profile, grid)
    m = np.exp(theta * u) * kvals
    runmax = np.maximum.accumulate(m)
    h = grid.h
    n = grid.n_nodes
    xi = u / theta  # -log of t^{1/theta}
    idx = np.minimum(np.floor(xi / h).astype(int), n - 1)
    x = np.exp(-xi)
    kx = profile(np.clip(x, 1e-300, 1.0))
    sup = np.maximum(runmax[idx], np.exp(theta * xi) * kx)
    sur = SampledFunction(grid, sup, "ds/s", t_power=1.0)
    sn = lattice_norm(sur, G)
    kn = profile_lattice_norm(profile, G, grid)
    return sn, kn, grid.nodes * sup

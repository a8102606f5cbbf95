"""Power-log parameter lattices, the substitution operators T, R, S_r, Q_r,
empirical operator-norm estimation and the J-side weight transform.

A lattice norm is the weighted q-mean (sup for q = infinity) against ds/s
of ``|f(t)| * t**-a * (1 - log t)**-b`` on (0, 1], or the mirrored analogue
on [1, inf).  Divergent q-integrals are reported as +inf together with a
flag and the estimated tail-decay exponent; the finite value truncated at
the grid floor stays available for ratio studies where both sides of a
comparison diverge at the same rate.

There is no computable certificate that a weight family yields an
interpolation lattice between L-infinity and L-infinity(1/t); that
property is treated as an assumption attached to the power-log family
(``embedding_check`` evaluates the two canonical test functions as the
standing sanity check).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .grid import DIVERGENCE_RHO, LogGrid, SampledFunction, tail_decay_exponent

__all__ = [
    "PowerLogWeight",
    "LatticeParam",
    "NormValue",
    "lattice_norm",
    "apply_T",
    "invert_T",
    "apply_R",
    "apply_S",
    "apply_Q",
    "estimate_op_norm",
    "embedding_check",
    "tilde_weight",
    "canonical_corpus",
    "parse_lattice_spec",
]


@dataclass(frozen=True)
class PowerLogWeight:
    """w(t) = t**-a * (1 - log t)**-b on (0, 1]; w(1) = 1."""

    a: float = 0.0
    b: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return t ** (-self.a) * (1.0 - np.log(t)) ** (-self.b)

    def log_weight(self, u):
        """log w at u = -log t (vectorized, overflow-safe)."""
        u = np.asarray(u, dtype=float)
        return self.a * u - self.b * np.log1p(u)


@dataclass(frozen=True)
class LatticeParam:
    """Parameter lattice for the K-method: weight, exponent and domain."""

    weight: PowerLogWeight
    q: float = 1.0
    domain: str = "(0,1]"  # or "[1,inf)"

    def __post_init__(self):
        if not (self.q >= 1):
            raise ValueError("q must lie in [1, inf]")
        if self.domain not in ("(0,1]", "[1,inf)"):
            raise ValueError("domain must be '(0,1]' or '[1,inf)'")


@dataclass(frozen=True)
class NormValue:
    """Lattice norm with divergence bookkeeping.

    ``value`` is +inf when the q-integral fails the tail-decay test; the
    grid-floor-truncated number is then kept in ``truncated_value``.
    """

    value: float
    truncated_value: float
    diverged: bool = False
    tail_exponent: float = math.inf

    def __float__(self) -> float:
        return float(self.value)


# lattices the suites instantiate repeatedly
def F_bq(b: float, q: float) -> LatticeParam:
    return LatticeParam(PowerLogWeight(1.0, b), q)


def G_bq(b: float, q: float) -> LatticeParam:
    return LatticeParam(PowerLogWeight(0.0, b), q)


def Linf_inv_t() -> LatticeParam:
    return LatticeParam(PowerLogWeight(1.0, 0.0), math.inf)


def Linf_plain() -> LatticeParam:
    return LatticeParam(PowerLogWeight(0.0, 0.0), math.inf)


def L1_dss() -> LatticeParam:
    return LatticeParam(PowerLogWeight(0.0, 0.0), 1.0)


def fk_lattice(p: float) -> LatticeParam:
    """sup-lattice with weight 1/(t log^{1/p}(e/t))."""
    return LatticeParam(PowerLogWeight(1.0, 1.0 / p), math.inf)


def lattice_norm(f: SampledFunction, F: LatticeParam) -> NormValue:
    """Weighted q-mean (or sup) of f in the lattice F.

    The q-integral runs over the grid span; its tail-decay exponent in the
    log variable decides the divergence flag (block masses decaying like
    k**-rho with rho <= 1 are not integrable down to 0).
    """
    u = -f.grid.log_nodes
    vals = f.values
    # log of weight times the function's symbolic t-power, folded exactly;
    # on the mirrored domain [1,inf) u represents +log t and powers of t
    # flip sign
    sign = 1.0 if F.domain == "(0,1]" else -1.0
    w_ln = sign * (F.weight.a - f.t_power) * u - F.weight.b * np.log1p(u)
    if math.isinf(F.q):
        with np.errstate(divide="ignore"):
            g = np.exp(w_ln + np.where(vals > 0, np.log(vals), -np.inf))
        return NormValue(float(np.max(g)), float(np.max(g)))
    q = F.q
    with np.errstate(divide="ignore"):
        logg = q * (w_ln + np.where(vals > 0, np.log(vals), -np.inf))
    g = np.exp(logg)
    if not np.all(np.isfinite(g[vals > 0])):
        return NormValue(math.inf, math.inf, True, -math.inf)
    total = float(np.trapezoid(g, u))
    rho = tail_decay_exponent(u, g)
    truncated = total ** (1.0 / q)
    if rho <= DIVERGENCE_RHO:
        return NormValue(math.inf, truncated, True, rho)
    return NormValue(truncated, truncated, False, rho)


def apply_T(f: SampledFunction) -> SampledFunction:
    """Tf(t) = f(t**2) / t by exact index doubling (no interpolation).

    Raw values are copied to the doubled indices; the prefactor lands in
    the symbolic t-power, so relabeling back reproduces f bit-for-bit.
    """
    grid = f.grid
    m = (grid.n_nodes - 1) // 2 + 1
    head = grid.head(m)
    vals = f.values[2 * np.arange(m)]
    return SampledFunction(head, vals, f.measure, t_power=2.0 * f.t_power - 1.0)


def invert_T(g: SampledFunction, full_grid: LogGrid) -> SampledFunction:
    """Values of f at the even indices of ``full_grid`` given g = Tf."""
    vals = np.full(full_grid.n_nodes, np.nan)
    vals[2 * np.arange(g.grid.n_nodes)] = g.values
    return SampledFunction(full_grid, np.nan_to_num(vals), g.measure, t_power=(g.t_power + 1.0) / 2.0)


def apply_R(f: SampledFunction) -> SampledFunction:
    """Rf(t) = f(sqrt(t)); even indices are exact halving, odd interpolated."""
    grid = f.grid
    k = np.arange(grid.n_nodes)
    vals = np.empty(grid.n_nodes)
    even = k % 2 == 0
    vals[even] = f.values[k[even] // 2]
    ko = k[~even]
    vals[~even] = 0.5 * (f.values[(ko - 1) // 2] + f.values[(ko + 1) // 2])
    return SampledFunction(grid, vals, f.measure, t_power=f.t_power / 2.0)


def apply_S(f: SampledFunction, r: float) -> SampledFunction:
    """S_r f(t) = f(t**r); dyadic r acts by index shifts, else log-linear."""
    if r <= 0:
        raise ValueError("r must be positive")
    grid = f.grid
    k = np.arange(grid.n_nodes, dtype=float) * r
    inside = k <= grid.n_nodes - 1
    m = int(np.sum(inside))
    ki = k[:m]
    lo = np.floor(ki).astype(int)
    frac = ki - lo
    hi = np.minimum(lo + 1, grid.n_nodes - 1)
    vals = (1 - frac) * f.values[lo] + frac * f.values[hi]
    return SampledFunction(grid.head(m), vals, f.measure, t_power=r * f.t_power)


def apply_Q(f: SampledFunction, r: float) -> SampledFunction:
    """Q_r f(s) = s**(1/r - 1) * f(s**(1/r))."""
    if r <= 1:
        raise ValueError("r must exceed 1")
    grid = f.grid
    k = np.arange(grid.n_nodes, dtype=float) / r
    lo = np.floor(k).astype(int)
    frac = k - lo
    hi = np.minimum(lo + 1, grid.n_nodes - 1)
    fvals = (1 - frac) * f.values[lo] + frac * f.values[hi]
    return SampledFunction(grid, fvals, f.measure, t_power=f.t_power / r + 1.0 / r - 1.0)


def embedding_check(F: LatticeParam, grid: LogGrid) -> dict:
    """Evaluate the canonical test functions t and 1 in F.

    ``norm_of_t`` bounds the L-infinity(1/t) -> F embedding constant from
    below (and equals it, by the lattice property); a finite ``norm_of_1``
    witnesses that bounded functions sit in F.
    """
    t = SampledFunction(grid, grid.nodes.copy(), "ds/s")
    one = SampledFunction(grid, np.ones(grid.n_nodes), "ds/s")
    nt = lattice_norm(t, F)
    n1 = lattice_norm(one, F)
    return {
        "norm_of_t": nt.value,
        "norm_of_1": n1.value,
        "t_finite": not nt.diverged and math.isfinite(nt.value),
        "one_finite": not n1.diverged and math.isfinite(n1.value),
    }


def estimate_op_norm(op, F: LatticeParam, corpus) -> float:
    """Empirical lower bound max ||op f||_F / ||f||_F over an F-finite corpus.

    Members whose norm is zero, divergent or non-finite are skipped; at
    least one member must survive.
    """
    best = 0.0
    used = 0
    for f in corpus:
        den = lattice_norm(f, F)
        if den.diverged or not 0.0 < den.value < math.inf:
            continue
        num = lattice_norm(op(f), F)
        if num.diverged:
            continue
        used += 1
        best = max(best, num.value / den.value)
    if used == 0:
        raise ValueError("corpus contains no usable F-finite member")
    return best


def tilde_weight(w: SampledFunction, return_flag: bool = False):
    """J-side companion weight: integral of min(1, s/t) w(s) ds/s on (0,1].

    Split at s = t: the inner part is a plain ds-integral of w divided by
    t (its grid-floor truncation estimate included), the outer part a ds/s
    integral; both pieces are cumulative trapezoid sums on the shared
    grid, one pass each.  With ``return_flag`` the divergence flag of the
    defining integral (w failing the ds-integrability decay test at 0) is
    returned alongside.
    """
    grid = w.grid
    v = w.dense_values()
    t = grid.nodes
    n = grid.n_nodes
    # inner: int_0^{t_i} w ds as a suffix trapezoid in linear s, plus the
    # grid-floor estimate w(t_min) * t_min
    cell = 0.5 * (v[:-1] + v[1:]) * (t[:-1] - t[1:])
    inner = np.empty(n)
    inner[-1] = 0.0
    inner[:-1] = np.cumsum(cell[::-1])[::-1]
    inner += v[-1] * t[-1]
    # outer: int_{t_i}^1 w ds/s as a prefix trapezoid in the log variable
    ucell = 0.5 * (v[:-1] + v[1:]) * grid.h
    outer = np.concatenate(([0.0], np.cumsum(ucell)))
    result = SampledFunction(grid, inner / t + outer, "ds/s")
    if not return_flag:
        return result
    # divergence of int_0 w ds: test the decay of the ds-integrand in u
    u = -grid.log_nodes
    rho = tail_decay_exponent(u, v * t)
    return result, rho <= DIVERGENCE_RHO


_GAMMAS = (0.0, 0.5, 1.0)
_DELTAS = (-2.0, -1.0, 0.0, 1.0, 2.0)


def canonical_corpus(grid: LogGrid, n_random: int = 100, seed: int = 0):
    """The fixed operator-norm test family plus random concave profiles.

    Deterministic: ``t**gamma (1-log t)**delta`` over the small exponent
    box, then ``n_random`` profiles built from sorted nonincreasing random
    slopes (concave by construction).
    """
    t = grid.nodes
    u = 1.0 - grid.log_nodes
    out = []
    for gamma in _GAMMAS:
        for delta in _DELTAS:
            out.append(SampledFunction(grid, t**gamma * u**delta, "ds/s"))
    rng = np.random.default_rng(seed)
    widths = -np.diff(t)  # increasing t order handled below
    for _ in range(n_random):
        slopes = np.sort(rng.uniform(0.0, 1.0, grid.n_nodes - 1))[::-1]
        # integrate slopes over cells from t_min upward -> concave increasing
        incr = np.concatenate(([0.0], np.cumsum((slopes * widths)[::-1])))[::-1]
        base = t[-1] * slopes[-1]
        vals = base + incr
        out.append(SampledFunction(grid, vals, "ds/s"))
    return out


_SPEC_RE = re.compile(
    r"^\s*t\^-(?P<a>[-0-9.]+)\s*\*\s*\(1-ln t\)\^-(?P<b>[-0-9.]+)\s*;\s*"
    r"q=(?P<q>inf|[0-9.]+)\s*;\s*domain=(?P<dom>\(0,1\]|\[1,inf\))\s*$"
)


def parse_lattice_spec(spec: str) -> LatticeParam:
    """Parse 't^-A*(1-ln t)^-B; q=Q; domain=(0,1]' into a LatticeParam."""
    m = _SPEC_RE.match(spec)
    if m is None:
        raise ValueError(f"cannot parse lattice spec {spec!r}")
    q = math.inf if m.group("q") == "inf" else float(m.group("q"))
    return LatticeParam(PowerLogWeight(float(m.group("a")), float(m.group("b"))), q, m.group("dom"))

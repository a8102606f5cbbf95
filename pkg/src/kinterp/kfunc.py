"""K- and J-functionals for concrete pairs, profile realization, and the
vector-valued K-functional by water-filling.

The splitting functional of a compatible pair is never computed from an
infimum over decompositions here; each supported pair has a closed form
in terms of the decreasing rearrangement, exact on step functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import StepRearrangement, rearrange_cells

__all__ = [
    "QuasiConcaveProfile",
    "DiscretePairElement",
    "VectorValuedInstance",
    "k_L1_Linf",
    "k_Lp_Linf",
    "k_weakL1_Linf",
    "k_discrete",
    "k_discrete_interp",
    "j_functional",
    "realize_conv0",
    "pisier_k",
    "pisier_product_k",
]

_SLACK = 1e-10


class QuasiConcaveProfile:
    """Concave nondecreasing piecewise-linear candidate K-functional.

    Breakpoints are strictly increasing t-values in (0, 1]; the profile is
    linear between consecutive breakpoints and on (0, breakpoints[0]] (so
    K(0+) = 0), and constant equal to ``plateau`` for t >= 1.
    """

    __slots__ = ("breakpoints", "values", "plateau")

    def __init__(self, breakpoints, values, plateau: float | None = None, validate: bool = True):
        t = np.asarray(breakpoints, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.shape != v.shape or t.ndim != 1 or len(t) == 0:
            raise ValueError("breakpoints and values must be matching 1-d arrays")
        if validate:
            if np.any(np.diff(t) <= 0) or t[0] <= 0 or t[-1] > 1 + 1e-12:
                raise ValueError("breakpoints must increase inside (0, 1]")
            scale = max(v[-1], 1e-300)
            if np.any(np.diff(v) < -_SLACK * scale):
                raise ValueError("profile must be nondecreasing")
            slopes = np.diff(v, prepend=0.0) / np.diff(t, prepend=0.0)
            if np.any(np.diff(slopes) > _SLACK * max(slopes[0], 1.0)):
                raise ValueError("profile must be concave (secant slopes nonincreasing)")
        self.breakpoints = t
        self.values = v
        self.plateau = float(v[-1] if plateau is None else plateau)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(t, self.breakpoints, self.values, right=self.plateau)
        return np.where(t < self.breakpoints[0], t * self.initial_slope, out)

    @property
    def initial_slope(self) -> float:
        return float(self.values[0] / self.breakpoints[0])

    def segments(self):
        """Per-segment (s0, s1, alpha, beta) with K(s) = alpha + beta*s on [s0, s1].

        The first segment starts at 0; a trailing plateau segment is not
        included (callers handle t >= 1 analytically).
        """
        t = np.concatenate(([0.0], self.breakpoints))
        v = np.concatenate(([0.0], self.values))
        beta = np.diff(v) / np.diff(t)
        alpha = v[:-1] - beta * t[:-1]
        return t[:-1], t[1:], alpha, beta

    def is_valid(self, slack: float = _SLACK) -> bool:
        """Nondecreasing, concave, K(t)/t nonincreasing at all node pairs."""
        t, v = self.breakpoints, self.values
        scale = max(float(v[-1]), 1e-300)
        if v[0] < -slack * scale or np.any(np.diff(v) < -slack * scale):
            return False
        slopes = np.diff(v, prepend=0.0) / np.diff(t, prepend=0.0)
        if np.any(np.diff(slopes) > slack * max(abs(slopes[0]), 1.0)):
            return False
        quot = v / t
        return not np.any(np.diff(quot) > slack * max(quot[0], 1.0))


@dataclass(frozen=True)
class DiscretePairElement:
    """Nonincreasing rearranged sequence a* of finite length."""

    astar: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.astar, dtype=float)
        if a.ndim != 1 or len(a) == 0:
            raise ValueError("astar must be a nonempty 1-d array")
        if np.any(a < 0) or np.any(np.diff(a) > 1e-15 * max(a[0], 1.0)):
            raise ValueError("astar must be nonincreasing and nonnegative")
        object.__setattr__(self, "astar", a)


def k_L1_Linf(t: float, fstar: StepRearrangement) -> float:
    """K(t) for the (L1, Linf) pair: the exact integral of f* up to t."""
    if t <= 0:
        raise ValueError("t must be positive")
    return fstar.integral(min(t, fstar.breaks[-1]))


def k_Lp_Linf(t: float, p: float, fstar: StepRearrangement) -> float:
    """K(t) for the (Lp, Linf) pair: ( int_0^{t^p} f*(s)^p ds )^{1/p}."""
    if p < 1:
        raise ValueError("p must satisfy p >= 1")
    if t <= 0:
        raise ValueError("t must be positive")
    if p == 1:
        return k_L1_Linf(t, fstar)
    cut = min(t**p, fstar.breaks[-1])
    return fstar.integral(cut, power=p) ** (1.0 / p)


def k_weakL1_Linf(t: float, fstar: StepRearrangement) -> float:
    """sup over s < t of s * f*(s), evaluated at step breakpoints."""
    br, lv = fstar.breaks, fstar.levels
    lo = np.concatenate(([0.0], br[:-1]))
    hi = np.minimum(br, t)
    active = hi > lo
    if not np.any(active):
        return 0.0
    return float(np.max(hi[active] * lv[active]))


def k_discrete(n: int, a: DiscretePairElement) -> float:
    """Partial sum of a* up to n (plateau at the full sum beyond length)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return float(np.sum(a.astar[: min(n, len(a.astar))]))


def k_discrete_interp(t: float, a: DiscretePairElement) -> float:
    """Concave piecewise-linear extension of the partial sums; t*a*_1 on [0,1]."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    s = a.astar
    n = len(s)
    if t >= n:
        return float(np.sum(s))
    j = int(math.floor(t))
    return float(np.sum(s[:j]) + (t - j) * s[j])


def j_functional(t: float, norm0: float, norm1: float) -> float:
    if norm0 < 0 or norm1 < 0:
        raise ValueError("norms must be nonnegative")
    if t <= 0:
        raise ValueError("t must be positive")
    return max(norm0, t * norm1)


def realize_conv0(target: QuasiConcaveProfile) -> StepRearrangement:
    """An f* on [0,1] whose (L1, Linf) K-functional reproduces the target.

    Takes the right derivative of the piecewise-linear target, so that
    int_0^t f* equals the target exactly at every breakpoint (constant 1
    realization for this pair); the plateau is enforced by a vanishing
    derivative past the last breakpoint.
    """
    _, s1, _, beta = target.segments()
    if np.any(beta < -_SLACK * max(target.plateau, 1e-300)):
        raise ValueError("target must be nondecreasing")
    beta = np.clip(beta, 0.0, None)
    if np.any(np.diff(beta) > _SLACK * max(beta[0], 1.0)):
        raise ValueError("target must be concave")
    keep = beta > 0
    if not np.any(keep):
        raise ValueError("zero profile has no realization")
    # drop trailing zero-slope segments; keep interior ones as explicit steps
    last = np.nonzero(keep)[0][-1]
    return StepRearrangement(s1[: last + 1], beta[: last + 1])


class VectorValuedInstance:
    """Finite discrete measure space with one K-density per atom.

    Each atom w carries a weight mu_w > 0 and a nonincreasing step density
    k_w (the right derivative of its K-profile); K_w(x) = int_0^x k_w.
    """

    def __init__(self, weights, densities):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or len(w) == 0 or np.any(w <= 0):
            raise ValueError("weights must be positive")
        if len(densities) != len(w):
            raise ValueError("one density per atom required")
        for d in densities:
            if not isinstance(d, StepRearrangement):
                raise ValueError("densities must be nonincreasing step functions")
        self.weights = w
        self.densities = list(densities)

    def k_profile(self, w: int, x: float) -> float:
        return self.densities[w].integral(x)


def _level_sup(d: StepRearrangement, lam: float, strict: bool) -> float:
    """sup{s : k(s) > lam} (strict) or sup{s : k(s) >= lam}."""
    lv, br = d.levels, d.breaks
    mask = lv > lam if strict else lv >= lam
    idx = np.nonzero(mask)[0]
    return float(br[idx[-1]]) if len(idx) else 0.0


def pisier_k(t: float, inst: VectorValuedInstance, rel_tol: float = 1e-10, max_iter: int = 200) -> float:
    """Vector-valued K-functional by water-filling.

    Maximizes sum_w mu_w K_w(phi_w) subject to sum_w mu_w phi_w <= t over
    phi >= 0.  The optimal allocation is a level cut of the densities:
    phi_w(lam) = sup{s : k_w(s) > lam}; lam is located by bisection and the
    remaining budget on flat (tied) density segments is split in proportion
    to the atom weights, which leaves the objective unchanged.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    mu = inst.weights
    ds = inst.densities

    def budget(lam: float, strict: bool = True) -> float:
        return float(sum(m * _level_sup(d, lam, strict) for m, d in zip(mu, ds)))

    lo, hi = 0.0, max(float(d.levels[0]) for d in ds)
    if budget(lo) <= t:
        phi = [_level_sup(d, 0.0, True) for d in ds]
        return float(sum(m * d.integral(p) for m, d, p in zip(mu, ds, phi)))
    # invariant: budget(lo) > t >= budget(hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        b = budget(mid)
        if b > t:
            lo = mid
        else:
            hi = mid
        if abs(b - t) <= rel_tol * t:
            break
    lam = hi
    base = np.array([_level_sup(d, lam, True) for d in ds])
    room = np.array([_level_sup(d, lam, False) for d in ds]) - base
    spent = float(np.dot(mu, base))
    remainder = max(t - spent, 0.0)
    phi = base.copy()
    cap = float(np.dot(mu, room))
    if cap > 0 and remainder > 0:
        frac = min(remainder / cap, 1.0)
        phi = base + frac * room
    return float(sum(m * d.integral(p) for m, d, p in zip(mu, ds, phi)))


def pisier_product_k(t: float, inst: VectorValuedInstance) -> float:
    """Same functional through the product-space route.

    Forms Psi(w, s) = k_w(s) on the product measure, merges the weighted
    steps into the decreasing rearrangement Psi*, and integrates it to t.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    widths, levels = [], []
    for m, d in zip(inst.weights, inst.densities):
        widths.append(d.widths() * m)
        levels.append(d.levels)
    widths = np.concatenate(widths)
    levels = np.concatenate(levels)
    keep = widths > 0
    psi_star = rearrange_cells(widths[keep], levels[keep])
    return psi_star.integral(min(t, psi_star.breaks[-1]))

"""Dyadic-log grids, sampled functions and decreasing rearrangements.

Everything downstream evaluates on functions sampled at the nodes
``t_k = exp(-h*k)``, ``h = ln2 / points_per_octave``, so that the
substitution operators ``t -> t**2`` and ``t -> sqrt(t)`` act as exact
index shifts.  Between nodes a sampled function is piecewise linear in
``(log t, value)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LogGrid",
    "SampledFunction",
    "StepRearrangement",
    "QuadResult",
    "rearrange",
    "rearrange_cells",
    "integrate",
    "sup_norm",
    "tail_decay_exponent",
]

#: relative decay exponent at or below which a ds/s tail is considered
#: non-integrable (block masses ~ k**-rho with rho <= 1 diverge).
DIVERGENCE_RHO = 1.05


class LogGrid:
    """Nodes ``t_k = exp(-h*k)``, ``k = 0..N`` with ``t_N <= t_min``.

    The log-gaps are all equal to ``h = ln2 / points_per_octave``, hence
    squaring maps node ``k`` to node ``2k`` and taking square roots maps
    node ``2k`` back to node ``k`` (pure index arithmetic, no resampling).
    """

    def __init__(self, t_min: float = 1e-12, points_per_octave: int = 64):
        if not 0.0 < t_min < 1.0:
            raise ValueError(f"t_min must lie in (0,1), got {t_min}")
        if points_per_octave < 1:
            raise ValueError("points_per_octave must be a positive integer")
        self.t_min = float(t_min)
        self.points_per_octave = int(points_per_octave)
        self.h = math.log(2.0) / self.points_per_octave
        self.n_nodes = int(math.ceil(-math.log(t_min) / self.h)) + 1
        k = np.arange(self.n_nodes)
        self.log_nodes = -self.h * k
        self.nodes = np.exp(self.log_nodes)
        self.nodes.setflags(write=False)
        self.log_nodes.setflags(write=False)

    def __len__(self) -> int:
        return self.n_nodes

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LogGrid)
            and other.t_min == self.t_min
            and other.points_per_octave == self.points_per_octave
        )

    def __repr__(self) -> str:
        return f"LogGrid(t_min={self.t_min:g}, points_per_octave={self.points_per_octave})"

    def head(self, n_nodes: int) -> "LogGrid":
        """The subgrid consisting of the first ``n_nodes`` nodes."""
        g = LogGrid.__new__(LogGrid)
        g.t_min = float(np.exp(-self.h * (n_nodes - 1)))
        g.points_per_octave = self.points_per_octave
        g.h = self.h
        g.n_nodes = n_nodes
        g.log_nodes = self.log_nodes[:n_nodes]
        g.nodes = self.nodes[:n_nodes]
        return g

    def mirrored_nodes(self) -> np.ndarray:
        """Nodes ``exp(+h*k)`` covering ``[1, 1/t_min]`` (increasing)."""
        return np.exp(self.h * np.arange(self.n_nodes))

    def index_of(self, t: float) -> float:
        """Fractional node index of ``t`` (0 at t=1, increasing toward t_min)."""
        return -math.log(t) / self.h

    def sample(self, func, measure: str = "ds/s") -> "SampledFunction":
        return SampledFunction(self, func(self.nodes), measure)


@dataclass(frozen=True)
class QuadResult:
    """Integral value plus truncation bookkeeping.

    ``truncation`` estimates the dropped mass over ``(0, t_min)`` (value at
    the lowest node times ``t_min`` for ds-integrals); ``truncated`` is set
    whenever the requested lower limit fell below the grid.  ``diverged``
    marks a ds/s-integral whose integrand tail decays too slowly to be
    integrable down to 0.
    """

    value: float
    truncation: float = 0.0
    truncated: bool = False
    diverged: bool = False

    def __float__(self) -> float:
        return float(self.value)


class SampledFunction:
    """Nonnegative function given by values at the nodes of a LogGrid.

    ``measure`` records the convention against which the function is meant
    to be integrated: plain Lebesgue ``ds`` or the multiplicative ``ds/s``.

    The represented function is ``raw(t) * t**t_power``.  Substitution
    operators relabel the raw values and adjust ``t_power`` instead of
    multiplying prefactors in, so their index algebra stays exact and
    norm evaluators can fold the power into weight exponents analytically.
    """

    __slots__ = ("grid", "values", "measure", "t_power")

    def __init__(self, grid: LogGrid, values, measure: str = "ds/s", t_power: float = 0.0):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n_nodes,):
            raise ValueError("values length must match grid")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        if np.any(values < 0):
            raise ValueError("values must be nonnegative")
        if measure not in ("ds", "ds/s"):
            raise ValueError("measure must be 'ds' or 'ds/s'")
        values = values.copy()
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.measure = measure
        self.t_power = float(t_power)

    def dense_values(self) -> np.ndarray:
        """Node values with the symbolic power of t multiplied in."""
        if self.t_power == 0.0:
            return self.values
        return self.values * np.exp(self.t_power * self.grid.log_nodes)

    def __call__(self, t):
        """Piecewise-linear interpolation of raw values in (log t, value)."""
        t = np.asarray(t, dtype=float)
        logt = np.log(t)
        # np.interp wants increasing x; log_nodes run from 0 down to log t_min
        raw = np.interp(logt, self.grid.log_nodes[::-1], self.values[::-1])
        return raw if self.t_power == 0.0 else raw * t**self.t_power

    def cells(self):
        """Cell widths and trapezoid-consistent cell values (Lebesgue)."""
        t = self.grid.nodes
        v = self.dense_values()
        widths = t[:-1] - t[1:]
        mids = 0.5 * (v[:-1] + v[1:])
        return widths, mids


class StepRearrangement:
    """Right-continuous nonincreasing step function on ``[0, 1]``.

    ``breaks[i]`` is the right endpoint of the i-th constant piece; the
    piece starts at ``breaks[i-1]`` (0 for the first).  Beyond ``breaks[-1]``
    the function is zero.
    """

    __slots__ = ("breaks", "levels")

    def __init__(self, breaks, levels):
        breaks = np.asarray(breaks, dtype=float)
        levels = np.asarray(levels, dtype=float)
        if breaks.ndim != 1 or breaks.shape != levels.shape:
            raise ValueError("breaks and levels must be 1-d arrays of equal length")
        if len(breaks) == 0:
            raise ValueError("empty step function")
        if np.any(np.diff(breaks) <= 0) or breaks[0] <= 0:
            raise ValueError("breaks must be strictly increasing and positive")
        if np.any(levels < 0):
            raise ValueError("levels must be nonnegative")
        if np.any(np.diff(levels) > 1e-15 * max(1.0, levels[0])):
            raise ValueError("levels must be nonincreasing")
        self.breaks = breaks.copy()
        self.levels = levels.copy()
        self.breaks.setflags(write=False)
        self.levels.setflags(write=False)

    @property
    def support(self) -> float:
        nz = np.nonzero(self.levels)[0]
        return float(self.breaks[nz[-1]]) if len(nz) else 0.0

    def widths(self) -> np.ndarray:
        w = np.empty_like(self.breaks)
        w[0] = self.breaks[0]
        w[1:] = np.diff(self.breaks)
        return w

    def __call__(self, s):
        # right-continuous: at a jump the smaller level wins, and the
        # function vanishes beyond its last break
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.breaks, s, side="right")
        out = np.where(idx < len(self.levels), self.levels[np.minimum(idx, len(self.levels) - 1)], 0.0)
        return np.where(s <= 0, self.levels[0], out)

    def integral(self, t: float, power: float = 1.0) -> float:
        """Exact ``int_0^t f*(s)**power ds`` (0**0 treated as 0)."""
        if t <= 0:
            return 0.0
        lo = np.concatenate(([0.0], self.breaks[:-1]))
        hi = np.minimum(self.breaks, t)
        w = np.clip(hi - lo, 0.0, None)
        if power == 1.0:
            lv = self.levels
        else:
            lv = np.where(self.levels > 0, self.levels, 1.0) ** power * (self.levels > 0)
        return float(np.dot(w, lv))

    def integral_batch(self, ts, power: float = 1.0) -> np.ndarray:
        """Exact ``int_0^t f*(s)**power ds`` for an array of upper limits."""
        ts = np.asarray(ts, dtype=float)
        lo = np.concatenate(([0.0], self.breaks[:-1]))
        if power == 1.0:
            lv = self.levels
        else:
            lv = np.where(self.levels > 0, self.levels, 1.0) ** power * (self.levels > 0)
        widths = self.breaks - lo
        csum = np.concatenate(([0.0], np.cumsum(widths * lv)))
        idx = np.searchsorted(self.breaks, ts, side="left")
        idx = np.minimum(idx, len(self.breaks) - 1)
        partial = np.clip(ts - lo[idx], 0.0, widths[idx]) * lv[idx]
        return np.where(ts <= 0, 0.0, csum[idx] + partial)

    def tail_integral(self, t: float, power: float = 1.0) -> float:
        """Exact ``int_t^{breaks[-1]} f*(s)**power ds``."""
        return self.integral(self.breaks[-1], power) - self.integral(t, power)

    def total(self, power: float = 1.0) -> float:
        return self.integral(self.breaks[-1], power)

    def distribution(self, lam: float) -> float:
        """Measure of ``{f* > lam}``."""
        lo = np.concatenate(([0.0], self.breaks[:-1]))
        return float(np.sum((self.breaks - lo)[self.levels > lam]))


def rearrange_cells(widths, values) -> StepRearrangement:
    """Decreasing rearrangement of a cellwise step function.

    Sorts (value, width) cells by descending value and accumulates widths;
    the distribution function is preserved exactly.
    """
    widths = np.asarray(widths, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.any(values < 0):
        raise ValueError("negative values have no decreasing rearrangement")
    order = np.argsort(-values, kind="stable")
    v = values[order]
    w = widths[order]
    # merge equal consecutive levels to keep the representation canonical
    keep = np.concatenate(([True], np.abs(np.diff(v)) > 0))
    idx = np.cumsum(keep) - 1
    merged_w = np.zeros(idx[-1] + 1)
    np.add.at(merged_w, idx, w)
    merged_v = v[keep]
    breaks = np.cumsum(merged_w)
    return StepRearrangement(breaks, merged_v)


def rearrange(f: SampledFunction) -> StepRearrangement:
    """Decreasing rearrangement of the cellwise step approximation of f.

    Requires Lebesgue measure and total domain measure <= 1.
    """
    if f.measure != "ds":
        raise ValueError("rearrange requires a function carrying measure 'ds'")
    widths, mids = f.cells()
    return rearrange_cells(widths, mids)


def tail_decay_exponent(u: np.ndarray, g: np.ndarray) -> float:
    """Estimated decay exponent rho of the integrand tail of ``int g(u) du``.

    Integrands behaving like ``u**-rho`` have block masses (over equal
    u-blocks) decaying like ``k**-rho``; the integral to infinity converges
    iff rho > 1.  Compares the mass of the last block against the block at
    half position.  Returns +inf for (numerically) compactly supported g.
    """
    n = len(u)
    if n < 16:
        return math.inf
    nblocks = 16
    edges = np.linspace(0, n, nblocks + 1).astype(int)
    masses = np.array(
        [np.trapezoid(g[a:b], u[a:b]) if b - a > 1 else 0.0 for a, b in zip(edges[:-1], edges[1:])]
    )
    total = masses.sum()
    m_last = masses[-1]
    m_half = masses[nblocks // 2 - 1]
    if total <= 0 or m_last <= 1e-300 or m_last < 1e-12 * total:
        return math.inf
    if m_half <= 0:
        return -math.inf  # growing tail
    u_last = 0.5 * (u[edges[-2]] + u[-1])
    u_half = 0.5 * (u[edges[nblocks // 2 - 1]] + u[edges[nblocks // 2]])
    if u_last <= u_half or u_half <= 0:
        return math.inf
    return float(-math.log(m_last / m_half) / math.log(u_last / u_half))


def integrate(f: SampledFunction, a: float, b: float) -> QuadResult:
    """Trapezoidal integral of f over [a, b] under f's measure convention.

    ds/s integrals use the trapezoid rule in the log variable, ds integrals
    in the linear variable.  Endpoints interior to a cell are interpolated
    linearly in (log t, value).  A lower limit below the grid floor is
    clipped and flagged, never an error; for ds-integrals the estimated
    dropped mass (value at t_min times t_min) is added to the result and
    recorded in ``truncation``.
    """
    if a > b:
        raise ValueError(f"integration bounds out of order: a={a} > b={b}")
    if b > 1.0 + 1e-12:
        raise ValueError("upper bound exceeds the grid span (0, 1]")
    grid = f.grid
    t_lo = grid.nodes[-1]
    truncated = a < t_lo
    dense = f.dense_values()
    trunc = float(dense[-1]) * t_lo if (truncated and f.measure == "ds") else 0.0
    a_eff = max(a, t_lo)
    b_eff = min(b, 1.0)
    if a_eff >= b_eff:
        return QuadResult(trunc, trunc, truncated, False)

    # sample points in decreasing t: [b_eff, nodes strictly inside, a_eff]
    i_b = grid.index_of(b_eff)
    i_a = grid.index_of(a_eff)
    k0 = int(math.ceil(i_b - 1e-9))
    k1 = int(math.floor(i_a + 1e-9))
    pts = []
    if k0 - i_b > 1e-9:
        pts.append(b_eff)
    if k1 >= k0:
        pts.extend(grid.nodes[k0 : k1 + 1])
    if i_a - k1 > 1e-9:
        pts.append(a_eff)
    pts = np.asarray(pts)
    vs = f(pts)

    if f.measure == "ds/s":
        value = float(np.trapezoid(vs, -np.log(pts)))
    else:
        value = float(np.trapezoid(vs[::-1], pts[::-1]))
    return QuadResult(value + trunc, trunc, truncated, False)


def sup_norm(f: SampledFunction, weight=None) -> float:
    """Max over nodes of ``weight(t_k) * |f(t_k)|`` (weight 1 if omitted)."""
    v = f.dense_values()
    if weight is None:
        return float(np.max(v))
    w = weight(f.grid.nodes) if callable(weight) else np.asarray(weight, dtype=float)
    return float(np.max(w * v))

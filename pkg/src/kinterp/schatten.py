"""Singular values, Schatten and Matsaev-type ideal norms, and the
discretized Volterra operator with its Hermitian components.

Singular values come from one-sided cyclic Jacobi iteration on the
matrix columns (compiled kernel when available); matrices are scaled to
unit Frobenius norm first so thresholds are meaningful, and small
singular values keep full relative accuracy because no Gram matrix is
ever formed.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from ._kernels import jacobi_svd
from .extrapolate import MatsaevSeqLattice, _geometric_ns, p_of_n

__all__ = [
    "CompactOperator",
    "s_numbers",
    "schatten_norm",
    "matsaev_norm",
    "matsaev_extrap",
    "volterra",
    "components",
    "ideal_norm_via_F",
    "ideal_extrap",
    "xlog_norm",
    "operator_from_csv",
    "operator_to_csv",
]

MAX_DIM = 512
_OFF_TOL = 1e-13
_MAX_SWEEPS = 60


class CompactOperator:
    """Dense complex square matrix with cached singular values."""

    __slots__ = ("entries", "_s")

    def __init__(self, entries):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator must be a square matrix")
        if m.shape[0] > MAX_DIM:
            raise ValueError(f"dimension capped at {MAX_DIM}")
        m.setflags(write=False)
        self.entries = m
        self._s = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def s(self) -> np.ndarray:
        if self._s is None:
            self._s = s_numbers(self)
        return self._s

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def adjoint(self) -> "CompactOperator":
        return CompactOperator(self.entries.conj().T)


def s_numbers(M: CompactOperator | np.ndarray) -> np.ndarray:
    """Nonincreasing singular values via one-sided Jacobi on the columns.

    The matrix is scaled to unit Frobenius norm and column pairs are
    rotated until every implicit Gram entry is below 1e-13 relative; the
    column norms are the singular values, rescaled and sorted descending.
    """
    m = M.entries if isinstance(M, CompactOperator) else np.asarray(M, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("operator must be a square matrix")
    scale = float(np.linalg.norm(m))
    if scale == 0.0:
        return np.zeros(m.shape[0])
    sv = np.asarray(jacobi_svd(m / scale, _OFF_TOL, _MAX_SWEEPS))
    return scale * np.sort(sv)[::-1]


def schatten_norm(M, p: float) -> float:
    """(sum s_j**p)**(1/p); the operator norm s_1 at p = inf."""
    if p < 1:
        raise ValueError("p must be >= 1")
    s = M.s if isinstance(M, CompactOperator) else np.asarray(M, dtype=float)
    if math.isinf(p):
        return float(s[0])
    return float(np.sum(s**p) ** (1.0 / p))


def matsaev_norm(M, alpha: float) -> float:
    """sup_n (sum_{j<=n} s_j) / log(en)**alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    s = M.s if isinstance(M, CompactOperator) else np.asarray(M, dtype=float)
    csum = np.cumsum(s)
    ns = np.arange(1, len(s) + 1)
    return float(np.max(csum / (1.0 + np.log(ns)) ** alpha))


def matsaev_extrap(M, alpha: float, p0: float, n_grid: int = 256) -> float:
    """sup over a geometric grid in (p-1) of (p-1)**alpha * ||M||_p."""
    if p0 <= 1:
        raise ValueError("p0 must exceed 1")
    s = M.s if isinstance(M, CompactOperator) else np.asarray(M, dtype=float)
    eps = np.geomspace(1e-6, p0 - 1.0, n_grid)
    pos = s[s > 0]
    with np.errstate(divide="ignore"):
        logs = np.log(pos)
    vals = np.empty(n_grid)
    for i, e in enumerate(eps):
        p = 1.0 + e
        vals[i] = e**alpha * np.exp(np.log(np.sum(np.exp(p * logs))) / p)
    return float(np.max(vals))


def volterra(n: int) -> CompactOperator:
    """Midpoint discretization of the integration operator on [0,1].

    Entries 1/n below the diagonal and 1/(2n) on it, which keeps V + V*
    exactly rank one (the discrete trace of the continuous identity
    Vf + V*f = integral of f).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    m = np.tril(np.full((n, n), 1.0 / n), -1) + np.eye(n) / (2.0 * n)
    return CompactOperator(m)


def components(M: CompactOperator):
    """Hermitian real/imaginary parts (M + M*)/2 and (M - M*)/(2i)."""
    a = M.entries
    return (
        CompactOperator(0.5 * (a + a.conj().T)),
        CompactOperator((a - a.conj().T) / 2j),
    )


def _partial_sums_at(s: np.ndarray, ns: np.ndarray) -> np.ndarray:
    csum = np.cumsum(s)
    return csum[np.minimum(ns, len(s)) - 1]


def _warn_if_edge(vals: np.ndarray, ns: np.ndarray, F_d, what: str):
    """Truncation warning when the lattice sup sits in the top decade of n."""
    weighted = vals / (1.0 + np.log(ns)) ** F_d.alpha
    edge = ns[int(np.argmax(weighted))]
    if edge >= ns[-1] / 10:
        warnings.warn(
            f"{what}: the sequence-lattice sup is attained near the truncation "
            f"edge (n={edge} of {ns[-1]}); the reported value is a lower bound",
            RuntimeWarning, stacklevel=3)


def ideal_norm_via_F(M, F_d: MatsaevSeqLattice, n_max: int = 10**5) -> float:
    """|| { sum_{j<=n} s_j } ||_{F_d} (exact partial sums, geometric n)."""
    s = M.s if isinstance(M, CompactOperator) else np.asarray(M, dtype=float)
    ns = _geometric_ns(n_max)
    vals = _partial_sums_at(s, ns)
    _warn_if_edge(vals, ns, F_d, "ideal_norm_via_F")
    return F_d.norm(vals, ns)


def ideal_extrap(M, F_d: MatsaevSeqLattice, n_max: int = 10**5) -> float:
    """|| { ||M||_{p(n)} } ||_{F_d} on the geometric n-subgrid."""
    s = M.s if isinstance(M, CompactOperator) else np.asarray(M, dtype=float)
    ns = _geometric_ns(n_max)
    ps = p_of_n(ns)
    pos = s[s > 0]
    logs = np.log(pos)
    vals = np.array([np.exp(np.log(np.sum(np.exp(p * logs))) / p) for p in ps])
    _warn_if_edge(vals, ns, F_d, "ideal_extrap")
    return F_d.norm(vals, ns)


def xlog_norm(M, F_d: MatsaevSeqLattice, n_max: int = 10**5) -> float:
    """|| { (1/log(en)) sum_{j<=n} s_j } ||_{F_d}."""
    s = M.s if isinstance(M, CompactOperator) else np.asarray(M, dtype=float)
    ns = _geometric_ns(n_max)
    vals = _partial_sums_at(s, ns) / (1.0 + np.log(ns))
    return F_d.norm(vals, ns)


def operator_from_csv(text: str) -> CompactOperator:
    """Parse 're,im;re,im;...' rows (one matrix row per line)."""
    rows = []
    for line in text.strip().splitlines():
        entries = []
        for cell in line.strip().split(";"):
            if not cell.strip():
                continue
            re_s, _, im_s = cell.partition(",")
            entries.append(complex(float(re_s), float(im_s or 0.0)))
        rows.append(entries)
    return CompactOperator(np.array(rows, dtype=complex))


def operator_to_csv(M: CompactOperator) -> str:
    lines = []
    for row in M.entries:
        lines.append(";".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"

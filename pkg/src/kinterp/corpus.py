"""Deterministic generation of profile, rearrangement, sequence and
operator corpora for the verification suites.

Same spec, same bytes: every family is driven by a seeded Generator and
pure arithmetic, and `corpus_digest` hashes the realized data so the
harness can assert reproducibility.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .grid import LogGrid, StepRearrangement
from .kfunc import QuasiConcaveProfile

__all__ = [
    "CorpusSpec",
    "profile_corpus",
    "rearrangement_corpus",
    "sequence_corpus",
    "operator_corpus",
    "tall_step_extension",
    "corpus_digest",
]

FAMILIES = ("power", "log-power", "step", "random-concave", "sequence", "operator")


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    n_power: int = 8
    n_log_power: int = 6
    n_step: int = 6
    n_random: int = 20
    n_sequence: int = 12
    n_operator: int = 4
    t_min: float = 1e-12
    points_per_octave: int = 64

    def grid(self) -> LogGrid:
        return LogGrid(self.t_min, self.points_per_octave)


def _power_profile(gamma: float) -> QuasiConcaveProfile:
    # K(t) = t**gamma clipped to plateau 1; exact values at its own breaks
    bp = np.geomspace(1e-14, 1.0, 600)
    return QuasiConcaveProfile(bp, bp**gamma, plateau=1.0, validate=False)


def _log_power_profile(delta: float) -> QuasiConcaveProfile:
    bp = np.geomspace(1e-14, 1.0, 600)
    vals = bp * (1.0 - np.log(bp)) ** delta
    vals = vals / vals[-1]
    return QuasiConcaveProfile(bp, vals, validate=False)


def _step_profile(eps: float, height: float) -> QuasiConcaveProfile:
    # realized by f* = height * indicator[0, eps]
    return QuasiConcaveProfile(
        np.array([eps, 1.0]), np.array([height * eps, height * eps]),
        plateau=height * eps, validate=False,
    )


def _random_concave(rng: np.random.Generator, grid: LogGrid) -> QuasiConcaveProfile:
    bp = grid.nodes[::-1]
    widths = np.diff(np.concatenate(([0.0], bp)))
    slopes = np.sort(rng.uniform(0.0, 1.0, len(bp)))[::-1]
    vals = np.cumsum(slopes * widths)
    vals /= vals[-1]
    return QuasiConcaveProfile(bp.copy(), vals, validate=False)


def profile_corpus(spec: CorpusSpec):
    """Conv0 profiles: powers, log-powers, steps and random concave."""
    grid = spec.grid()
    rng = np.random.default_rng(spec.seed)
    out = []
    gammas = np.linspace(0.5, 1.0, spec.n_power)
    for i, gamma in enumerate(gammas):
        out.append((f"power:{gamma:.4f}", _power_profile(float(gamma))))
    deltas = np.linspace(0.15, 1.0, spec.n_log_power)
    for delta in deltas:
        out.append((f"log-power:{delta:.4f}", _log_power_profile(float(delta))))
    epss = np.geomspace(1e-6, 0.5, spec.n_step)
    for eps in epss:
        out.append((f"step:{eps:.2e}", _step_profile(float(eps), 1.0 / float(eps))))
    for j in range(spec.n_random):
        out.append((f"random-concave:{j}", _random_concave(rng, grid)))
    for case_id, prof in out:
        if not prof.is_valid(1e-9):
            raise AssertionError(f"invalid profile generated: {case_id}")
    return out


def tall_step_extension(depth: int, t_min: float = 1e-12):
    """Adversarial ladder K = min(t/eps, 1) with eps marching toward the
    grid floor; drives the F = L-infinity negative control."""
    out = []
    eps = 1e-2
    floor = max(t_min * 4.0, 1e-14)
    for k in range(depth):
        out.append((f"tall-step:{eps:.2e}", _step_profile(eps, 1.0 / eps)))
        eps = max(eps / 16.0, floor)
    return out


def rearrangement_corpus(spec: CorpusSpec):
    """Step rearrangements on [0,1]: powers, log-powers, plain steps."""
    rng = np.random.default_rng(spec.seed + 1)
    grid = spec.grid()
    br = grid.nodes[::-1].copy()
    lo = np.concatenate(([0.0], br[:-1]))
    out = []
    for gamma in np.linspace(0.1, 0.9, spec.n_power):
        # cell averages of s**-gamma (exact antiderivative)
        g1 = 1.0 - gamma
        avg = (br**g1 - lo**g1) / (g1 * (br - lo))
        out.append((f"rpow:{gamma:.3f}", StepRearrangement(br, avg)))
    for delta in np.linspace(0.5, 2.0, spec.n_log_power):
        vals = (1.0 - np.log(br)) ** delta
        out.append((f"rlog:{delta:.3f}", StepRearrangement(br, vals)))
    for eps in np.geomspace(1e-4, 0.8, spec.n_step):
        out.append((f"rstep:{eps:.2e}", StepRearrangement(np.array([eps]), np.array([1.0 / eps]))))
    for j in range(spec.n_random):
        nlev = int(rng.integers(4, 40))
        breaks = np.sort(rng.uniform(1e-6, 1.0, nlev))
        breaks = np.unique(breaks)
        levels = np.sort(rng.uniform(0.05, 4.0, len(breaks)))[::-1]
        out.append((f"rrand:{j}", StepRearrangement(breaks, levels)))
    return out


def sequence_corpus(spec: CorpusSpec, length: int = 4096):
    """Nonincreasing sequences: powers j**-beta and random sorted."""
    rng = np.random.default_rng(spec.seed + 2)
    j = np.arange(1, length + 1, dtype=float)
    out = []
    for beta in np.linspace(0.25, 2.5, spec.n_sequence // 2):
        out.append((f"spow:{beta:.3f}", j**-beta))
    for k in range(spec.n_sequence - spec.n_sequence // 2):
        out.append((f"srand:{k}", np.sort(rng.uniform(0, 1, length))[::-1]))
    return out


def operator_corpus(spec: CorpusSpec, n: int = 64):
    """Small operator zoo: volterra, diagonal powers, seeded Gaussian."""
    from .schatten import CompactOperator, volterra

    rng = np.random.default_rng(spec.seed + 3)
    out = [("volterra", volterra(n))]
    for beta in (0.5, 1.0, 2.0):
        out.append((f"diag:{beta}", CompactOperator(np.diag(np.arange(1, n + 1, dtype=float) ** -beta))))
    for k in range(max(spec.n_operator - 4, 0)):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        out.append((f"gauss:{k}", CompactOperator(m / n)))
    return out


def corpus_digest(spec: CorpusSpec) -> str:
    """SHA-256 over the realized profile data; determinism witness."""
    h = hashlib.sha256()
    for case_id, prof in profile_corpus(spec):
        h.update(case_id.encode())
        h.update(np.ascontiguousarray(prof.breakpoints).tobytes())
        h.update(np.ascontiguousarray(prof.values).tobytes())
    for case_id, fs in rearrangement_corpus(spec):
        h.update(case_id.encode())
        h.update(np.ascontiguousarray(fs.breaks).tobytes())
        h.update(np.ascontiguousarray(fs.levels).tobytes())
    return h.hexdigest()

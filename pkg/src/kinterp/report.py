"""Verification report records and their serialization.

Reports are plain dict-backed records with a stable field order so that
byte-identical reruns produce byte-identical files (timestamps can be
suppressed for that purpose).
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

__all__ = ["Assertion", "CaseRecord", "VerificationReport", "emit", "load_report"]


def _sig6(x):
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, bool):
        return x
    if isinstance(x, (int,)):
        return x
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.6g}")


@dataclass
class Assertion:
    name: str
    bound: float | str
    realized: float | str
    passed: bool

    def row(self):
        return {
            "name": self.name,
            "bound": _sig6(self.bound),
            "realized": _sig6(self.realized),
            "passed": self.passed,
        }


@dataclass
class CaseRecord:
    case_id: str
    value: float
    flags: str = ""

    def row(self):
        return {"case_id": self.case_id, "value": _sig6(self.value), "flags": self.flags}


@dataclass
class VerificationReport:
    suite: str
    status: str = "PASS"  # PASS | FAIL | SKIP
    spec: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    windows: dict = field(default_factory=dict)
    drift: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    runtime_s: float = 0.0
    timestamp: float | None = None

    def finish(self, t0: float, no_timestamp: bool = False):
        # --no-timestamp exists to make reruns byte-identical, so it also
        # zeroes the wall-clock field
        self.runtime_s = 0.0 if no_timestamp else time.perf_counter() - t0
        self.timestamp = None if no_timestamp else time.time()
        failed = [a for a in self.assertions if not a.passed]
        if self.status != "SKIP":
            self.status = "FAIL" if failed else "PASS"
        return self

    def check(self, name, bound, realized, passed):
        self.assertions.append(Assertion(name, bound, realized, bool(passed)))
        return passed

    def as_dict(self):
        out = {
            "suite": self.suite,
            "status": self.status,
            "spec": self.spec,
            "stats": {k: _sig6(v) for k, v in self.stats.items()},
            "assertions": [a.row() for a in self.assertions],
            "windows": {k: [_sig6(v[0]), _sig6(v[1])] for k, v in self.windows.items()},
            "drift": {k: _sig6(v) for k, v in self.drift.items()},
            "cases": [c.row() for c in self.cases],
            "notes": list(self.notes),
            "runtime_s": _sig6(self.runtime_s),
        }
        if self.timestamp is not None:
            out["timestamp"] = self.timestamp
        return out


def emit(report: VerificationReport, fmt: str = "json", path=None) -> str:
    """Serialize a report as json, csv (one row per case) or text table."""
    if fmt == "json":
        text = json.dumps(report.as_dict(), indent=2, sort_keys=False) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["case_id", "value", "flags"])
        w.writeheader()
        for c in report.cases:
            w.writerow(c.row())
        text = buf.getvalue()
    elif fmt == "text-table":
        lines = [f"suite: {report.suite}    status: {report.status}"]
        lines.append(f"runtime_s: {_sig6(report.runtime_s)}")
        for k, v in report.stats.items():
            lines.append(f"  {k:<28} {_sig6(v)}")
        lines.append(f"  {'assertion':<40} {'bound':>12} {'realized':>12} {'pass':>6}")
        for a in report.assertions:
            lines.append(
                f"  {a.name:<40} {str(_sig6(a.bound)):>12} {str(_sig6(a.realized)):>12} "
                f"{'ok' if a.passed else 'FAIL':>6}"
            )
        for note in report.notes:
            lines.append(f"  note: {note}")
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)

"""Command-line harness: suite runner, corpus generation and one-shot
norm evaluation.

Exit codes: 0 all PASS, 1 any FAIL, 2 usage error, 3 internal error.
SKIPped suites are listed but do not affect the exit code.
"""

from __future__ import annotations

import argparse
import json
import math
import pathlib
import sys

import numpy as np

from .corpus import CorpusSpec, corpus_digest, profile_corpus, rearrangement_corpus
from .grid import LogGrid, SampledFunction
from .lattice import lattice_norm, parse_lattice_spec
from .report import emit
from .suites import SUITES, SuiteOptions, run_suite

_CONFIG_KEYS = ("seed", "grid_ppo", "tmin", "format", "workers", "no_timestamp")


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=pathlib.Path, help="JSON file mirroring the flags")
    common.add_argument("--grid-ppo", type=int, default=None, help="points per octave (default 64)")
    common.add_argument("--tmin", type=float, default=None, help="grid floor (default 1e-12)")
    common.add_argument("--seed", type=int, default=None, help="corpus seed (default 0)")
    common.add_argument("--format", choices=("json", "csv", "text-table"), default=None)
    common.add_argument("--workers", type=int, default=None, help="parallel workers per suite")
    common.add_argument("--no-timestamp", action="store_true", default=None)

    ap = argparse.ArgumentParser(prog="kinterp", description=__doc__, parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("suite", help="run a verification suite", parents=[common])
    ps.add_argument("name", help=f"one of: {', '.join(sorted(SUITES))}, or 'all'")
    ps.add_argument("--lattice", default=None, help="baseq only: 'Linf' runs the negative control")
    ps.add_argument("--out", type=pathlib.Path, default=None, help="report file (stdout otherwise)")
    ps.add_argument("--no-baselines", action="store_true", help="skip baseline comparisons")

    pc = sub.add_parser("corpus", help="corpus operations", parents=[common])
    pc.add_argument("action", choices=("gen",))
    pc.add_argument("--out", type=pathlib.Path, required=True, help="output directory")
    pc.add_argument("--families", default="profile,rearrangement",
                    help="comma list: profile,rearrangement")

    pn = sub.add_parser("norm", help="evaluate a single norm", parents=[common])
    pn.add_argument("which", choices=("lattice", "grand-def", "grand-fk", "schatten", "matsaev"))
    pn.add_argument("--input", required=True,
                    help="CSV file of 't,value' lines, operator CSV, or a generator "
                         "spec like volterra:64 / diagonal:3,2,1 / random-gaussian:32:7")
    pn.add_argument("--lattice", default=None, help="lattice spec string for 'lattice'")
    pn.add_argument("--measure", choices=("ds", "ds/s"), default="ds/s")
    pn.add_argument("--p", type=float, default=2.0)
    pn.add_argument("--alpha", type=float, default=1.0)
    return ap


def _load_config(ns) -> dict:
    cfg = {}
    if ns.config is not None:
        cfg = json.loads(ns.config.read_text())
        unknown = set(cfg) - set(_CONFIG_KEYS)
        if unknown:
            raise _UsageError(f"unknown config keys: {sorted(unknown)}")
    merged = {
        "seed": 0, "grid_ppo": 64, "tmin": 1e-12, "format": "text-table",
        "workers": 1, "no_timestamp": False,
    }
    merged.update(cfg)
    for key, attr in (("seed", "seed"), ("grid_ppo", "grid_ppo"), ("tmin", "tmin"),
                      ("format", "format"), ("workers", "workers"),
                      ("no_timestamp", "no_timestamp")):
        val = getattr(ns, attr, None)
        if val is not None:
            merged[key] = val
    return merged


def _suite_options(cfg, ns) -> SuiteOptions:
    return SuiteOptions(
        seed=cfg["seed"],
        t_min=cfg["tmin"],
        points_per_octave=cfg["grid_ppo"],
        workers=cfg["workers"],
        no_timestamp=cfg["no_timestamp"],
        check_baselines=not getattr(ns, "no_baselines", False),
        baseq_lattice=getattr(ns, "lattice", None),
    )


def _cmd_suite(ns, cfg) -> int:
    names = sorted(SUITES) if ns.name == "all" else [ns.name]
    for name in names:
        if name not in SUITES:
            print(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}",
                  file=sys.stderr)
            return 2
    opts = _suite_options(cfg, ns)
    worst = 0
    for name in names:
        rep = run_suite(name, opts)
        text = emit(rep, cfg["format"], ns.out if len(names) == 1 else None)
        if ns.out is None or len(names) > 1:
            sys.stdout.write(text)
        if rep.status == "FAIL":
            worst = max(worst, 1)
        elif rep.status == "SKIP":
            print(f"suite {name}: SKIP", file=sys.stderr)
    return worst


def _cmd_corpus(ns, cfg) -> int:
    out = ns.out
    out.mkdir(parents=True, exist_ok=True)
    spec = CorpusSpec(seed=cfg["seed"], t_min=cfg["tmin"], points_per_octave=cfg["grid_ppo"])
    manifest = {"seed": cfg["seed"], "digest": corpus_digest(spec), "members": []}
    families = [f.strip() for f in ns.families.split(",") if f.strip()]
    if "profile" in families:
        for cid, prof in profile_corpus(spec):
            fname = f"profile_{cid.replace(':', '_').replace('/', '_')}.csv"
            rows = "\n".join(f"{t:.17g},{v:.17g}" for t, v in zip(prof.breakpoints, prof.values))
            (out / fname).write_text(rows + "\n")
            manifest["members"].append({"id": cid, "file": fname, "kind": "profile"})
    if "rearrangement" in families:
        for cid, fs in rearrangement_corpus(spec):
            fname = f"rearr_{cid.replace(':', '_').replace('/', '_')}.csv"
            rows = "\n".join(f"{b:.17g},{v:.17g}" for b, v in zip(fs.breaks, fs.levels))
            (out / fname).write_text(rows + "\n")
            manifest["members"].append({"id": cid, "file": fname, "kind": "rearrangement"})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(manifest['members'])} members to {out}")
    return 0


def _read_function(path: str, grid: LogGrid, measure: str) -> SampledFunction:
    """CSV of 't,value' lines, or a generator spec: power:G, logpow:D, const:C."""
    if path.startswith("power:"):
        return SampledFunction(grid, grid.nodes ** float(path.split(":")[1]), measure)
    if path.startswith("logpow:"):
        d = float(path.split(":")[1])
        return SampledFunction(grid, grid.nodes * (1 - grid.log_nodes) ** d, measure)
    if path.startswith("const:"):
        return SampledFunction(grid, np.full(grid.n_nodes, float(path.split(":")[1])), measure)
    rows = []
    for line in pathlib.Path(path).read_text().strip().splitlines():
        t_s, _, v_s = line.partition(",")
        rows.append((float(t_s), float(v_s)))
    rows.sort()
    ts = np.array([r[0] for r in rows])
    vs = np.array([r[1] for r in rows])
    vals = np.interp(grid.log_nodes, np.log(ts), vs)
    return SampledFunction(grid, np.clip(vals, 0.0, None), measure)


def _read_operator(spec: str):
    from .schatten import CompactOperator, operator_from_csv, volterra

    if spec.startswith("volterra:"):
        return volterra(int(spec.split(":")[1]))
    if spec.startswith("diagonal:"):
        vals = [float(x) for x in spec.split(":")[1].split(",")]
        return CompactOperator(np.diag(vals))
    if spec.startswith("random-gaussian:"):
        _, n_s, seed_s = spec.split(":")
        rng = np.random.default_rng(int(seed_s))
        n = int(n_s)
        return CompactOperator(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return operator_from_csv(pathlib.Path(spec).read_text())


def _cmd_norm(ns, cfg) -> int:
    grid = LogGrid(cfg["tmin"], cfg["grid_ppo"])
    if ns.which == "lattice":
        if ns.lattice is None:
            raise _UsageError("norm lattice requires --lattice")
        F = parse_lattice_spec(ns.lattice)
        f = _read_function(ns.input, grid, ns.measure)
        nv = lattice_norm(f, F)
        print(json.dumps({"norm": nv.value if math.isfinite(nv.value) else "inf",
                          "truncated": nv.truncated_value, "diverged": nv.diverged}))
        return 0
    if ns.which in ("grand-def", "grand-fk"):
        from .grand import GrandParams, grand_norm_def, grand_norm_fk
        from .grid import rearrange

        f = _read_function(ns.input, grid, "ds")
        fstar = rearrange(f)
        gp = GrandParams(ns.p, ns.alpha)
        v = grand_norm_def(fstar, gp) if ns.which == "grand-def" else grand_norm_fk(fstar, gp)
        print(json.dumps({"norm": v}))
        return 0
    from .schatten import matsaev_norm, schatten_norm

    M = _read_operator(ns.input)
    v = schatten_norm(M, ns.p) if ns.which == "schatten" else matsaev_norm(M, ns.alpha)
    print(json.dumps({"norm": v}))
    return 0


def main(argv=None) -> int:
    ap = _build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = _load_config(ns)
        if ns.command == "suite":
            return _cmd_suite(ns, cfg)
        if ns.command == "corpus":
            return _cmd_corpus(ns, cfg)
        if ns.command == "norm":
            return _cmd_norm(ns, cfg)
        return 2
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except BrokenPipeError:
        return 0
    except Exception as exc:  # internal error contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

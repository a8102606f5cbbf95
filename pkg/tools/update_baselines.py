#!/usr/bin/env python3
"""Regenerate the checked-in suite baselines from a fresh run.

Run after intentional changes to corpora or norm evaluators; suites then
compare future windows against these values with 10% tolerance.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from kinterp.suites import SUITES, SuiteOptions  # noqa: E402

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "kinterp" / "data" / "baselines.json"


def main():
    opts = SuiteOptions(no_timestamp=True, check_baselines=False)
    baselines = {}
    for name, fn in SUITES.items():
        rep = fn(opts)
        if rep.windows:
            baselines[name] = {k: [v[0], v[1]] for k, v in sorted(rep.windows.items())}
        print(f"{name}: {rep.status} ({len(rep.windows)} windows)")
    OUT.write_text(json.dumps(baselines, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()

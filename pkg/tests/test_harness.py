"""CLI surface, report serialization, corpus determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from kinterp.corpus import CorpusSpec, corpus_digest, profile_corpus, sequence_corpus
from kinterp.report import Assertion, CaseRecord, VerificationReport, emit
from kinterp.suites import SUITES, SuiteOptions, run_suite


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "kinterp.cli", *args],
        capture_output=True, text=True, timeout=600,
    )


class TestCorpusDeterminism:
    def test_same_spec_same_bytes(self):
        spec = CorpusSpec(seed=42)
        assert corpus_digest(spec) == corpus_digest(CorpusSpec(seed=42))

    def test_different_seed_differs(self):
        assert corpus_digest(CorpusSpec(seed=1)) != corpus_digest(CorpusSpec(seed=2))

    def test_profiles_validated(self):
        for cid, prof in profile_corpus(CorpusSpec(seed=9, n_random=30)):
            assert prof.is_valid(1e-9), cid

    def test_sequences_nonincreasing(self):
        for cid, seq in sequence_corpus(CorpusSpec(seed=3)):
            assert np.all(np.diff(seq) <= 1e-15), cid


class TestReportEmit:
    def make_report(self):
        rep = VerificationReport("demo", spec={"seed": 0})
        rep.cases.append(CaseRecord("case-a", 1.234567891, ""))
        rep.cases.append(CaseRecord("case-b", float("inf"), "DIVERGED"))
        rep.stats["window"] = 2.5
        rep.assertions.append(Assertion("thing <= bound", 2.0, 1.5, True))
        rep.runtime_s = 0.5
        return rep

    def test_json_roundtrip(self, tmp_path):
        rep = self.make_report()
        path = tmp_path / "r.json"
        emit(rep, "json", path)
        back = json.loads(path.read_text())
        assert back["suite"] == "demo"
        assert back["cases"][0]["value"] == 1.23457  # six significant digits
        assert back["cases"][1]["value"] == "inf"

    def test_csv_one_row_per_case(self):
        text = emit(self.make_report(), "csv")
        rows = [r for r in text.strip().splitlines() if r]
        assert len(rows) == 3  # header + 2 cases

    def test_text_table_stable_width(self):
        a = emit(self.make_report(), "text-table")
        b = emit(self.make_report(), "text-table")
        assert a == b

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit(self.make_report(), "yaml")


class TestSuiteRegistry:
    def test_all_names_registered(self):
        assert set(SUITES) == {
            "baseq", "equivK", "fk", "reiter", "matsaev", "pisier", "wtilde", "limits", "llogl",
        }

    def test_unknown_suite_raises(self):
        with pytest.raises(KeyError):
            run_suite("nope")

    def test_wtilde_deterministic_report(self):
        opts = SuiteOptions(no_timestamp=True)
        a = emit(run_suite("wtilde", opts), "json")
        b = emit(run_suite("wtilde", opts), "json")
        assert a == b


class TestCli:
    def test_usage_error_exit_2(self):
        assert run_cli("suite", "nosuchsuite").returncode == 2

    def test_wtilde_pass_exit_0(self):
        r = run_cli("suite", "wtilde", "--no-timestamp")
        assert r.returncode == 0, r.stderr
        assert "status: PASS" in r.stdout

    def test_negative_control_exit_1(self):
        r = run_cli("suite", "baseq", "--lattice", "Linf", "--no-timestamp")
        assert r.returncode == 1
        assert "FAIL" in r.stdout

    def test_end_to_end_determinism(self):
        args = ("suite", "pisier", "--no-timestamp", "--format", "json", "--seed", "7")
        a = run_cli(*args)
        b = run_cli(*args)
        assert a.returncode == 0
        assert a.stdout == b.stdout

    def test_config_file_mirrors_flags(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 7, "no_timestamp": True, "format": "json"}))
        a = run_cli("suite", "pisier", "--config", str(cfg))
        b = run_cli("suite", "pisier", "--seed", "7", "--no-timestamp", "--format", "json")
        assert a.stdout == b.stdout

    def test_config_rejects_unknown_keys(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run_cli("suite", "wtilde", "--config", str(cfg)).returncode == 2

    def test_corpus_gen_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "c1", tmp_path / "c2"
        assert run_cli("corpus", "gen", "--out", str(out1), "--seed", "5").returncode == 0
        assert run_cli("corpus", "gen", "--out", str(out2), "--seed", "5").returncode == 0
        m1 = (out1 / "manifest.json").read_bytes()
        m2 = (out2 / "manifest.json").read_bytes()
        assert m1 == m2
        f1 = sorted(p.name for p in out1.iterdir())
        assert f1 == sorted(p.name for p in out2.iterdir())
        for name in f1:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_norm_lattice(self, tmp_path):
        f = tmp_path / "f.csv"
        ts = np.geomspace(1e-13, 1.0, 4000)
        f.write_text("\n".join(f"{t},{t}" for t in ts))
        r = run_cli("norm", "lattice", "--input", str(f),
                    "--lattice", "t^-1*(1-ln t)^-0; q=inf; domain=(0,1]")
        assert r.returncode == 0
        assert json.loads(r.stdout)["norm"] == pytest.approx(1.0, rel=2e-3)

    def test_norm_operator_generators(self):
        r = run_cli("norm", "schatten", "--input", "diagonal:3,4", "--p", "2")
        assert json.loads(r.stdout)["norm"] == pytest.approx(5.0)
        r2 = run_cli("norm", "matsaev", "--input", "volterra:16", "--alpha", "1")
        assert r2.returncode == 0 and json.loads(r2.stdout)["norm"] > 0

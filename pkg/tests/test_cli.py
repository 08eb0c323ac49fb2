"""Command-line behaviour: exit codes, artifacts, manifests and determinism."""

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from logconcave.cli import REPORT_COLUMNS, run


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCheck:
    def test_passes(self):
        code, out, _ = _run("check", "--density", "catalog:laplace", "--trials", "2", "--seed", "1")
        assert code == 0
        rows = _rows(out)
        assert list(rows[0]) == list(REPORT_COLUMNS)
        assert all(r["pass"] == "true" for r in rows)

    def test_byte_identical(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert _run("check", "--density", "catalog:gamma:2", "--trials", "1", "--seed", "4", "--out", str(p))[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        m = [json.loads((tmp_path / f"{n}.csv.manifest.json").read_text()) for n in "ab"]
        assert m[0]["artifact_sha256"] == m[1]["artifact_sha256"]
        assert m[0]["config_digest"] == m[1]["config_digest"]

    def test_manifest(self, tmp_path):
        out = tmp_path / "r.csv"
        _run("check", "--density", "catalog:uniform", "--trials", "1", "--out", str(out))
        m = json.loads((tmp_path / "r.csv.manifest.json").read_text())
        for key in ("version", "command", "seed", "tolerances", "config", "config_digest", "columns", "columns_version", "artifact_sha256", "passed"):
            assert key in m
        assert m["columns"] == list(REPORT_COLUMNS)
        assert m["seed"] == 0 and m["passed"] is True

    def test_different_seed_changes_output(self):
        a = _run("check", "--density", "catalog:laplace", "--trials", "1", "--seed", "1", "--suite", "product")[1]
        b = _run("check", "--density", "catalog:laplace", "--trials", "1", "--seed", "2", "--suite", "product")[1]
        assert a != b

    def test_json_format(self):
        code, out, _ = _run("check", "--density", "catalog:laplace", "--trials", "1", "--suite", "product", "--json")
        data = json.loads(out)
        assert code == 0 and data["command"] == "check"


class TestExitCodes:
    def test_bad_density(self):
        code, _, err = _run("check", "--density", "catalog:cauchy")
        assert code == 2 and "cauchy" in err

    def test_bad_json_file(self, tmp_path):
        p = tmp_path / "d.json"
        p.write_text("{oops")
        code, _, err = _run("hazard", "--density", str(p))
        assert code == 2 and "line 1" in err

    def test_empty_data(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("")
        assert _run("confint", "--data", str(p))[0] == 2

    def test_hazard_control_fails(self):
        code, out, _ = _run("hazard", "--density", "control:bimodal")
        assert code == 1
        rows = _rows(out)
        assert len(rows) >= 1 and {r["kind"] for r in rows} <= {"left", "right"}

    def test_hazard_catalog(self):
        assert _run("hazard", "--density", "catalog:beta", "--grid", "200")[0] == 0

    def test_bad_tolerance_env(self, monkeypatch):
        monkeypatch.setenv("LOGCONCAVE_TOLERANCES", "{not json")
        assert _run("hazard", "--density", "catalog:laplace")[0] == 2

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            _run("check")
        assert exc.value.code == 2


class TestCommands:
    def test_envelope(self):
        code, out, _ = _run("envelope", "--density", "catalog:gaussian:2", "--points", "200")
        names = [r["name"] for r in _rows(out)]
        assert code == 0 and "envelope" in names and "tail_envelope" in names

    def test_moment_bound_equality(self):
        code, out, _ = _run("moment-bound", "--density", "catalog:laplace", "--x0", "0,1", "--json")
        assert code == 0
        assert "equal" in out

    def test_converge(self):
        code, out, _ = _run("converge", "--sequence", "location", "--n", "10,100", "--poly", "x", "--theta", "0.5,3", "--json")
        data = json.loads(out)["result"]
        assert code == 0
        assert json.dumps(data).count("diverged") >= 1

    def test_confint(self, tmp_path):
        x = np.random.default_rng(0).laplace(size=60)
        p = tmp_path / "x.csv"
        p.write_text("value\n" + "\n".join(repr(float(v)) for v in x) + "\n")
        code, out, _ = _run("confint", "--data", str(p), "--alpha", "0.1")
        res = json.loads(out)["result"]
        assert code == 0 and res["kind"] == "inner approximation"
        lo, hi = res["interval"]
        assert lo <= res["fit_moment"] <= hi

    def test_sample_deterministic(self):
        a = _run("sample", "--density", "catalog:exponential", "--n", "5", "--seed", "3")[1]
        b = _run("sample", "--density", "catalog:exponential", "--n", "5", "--seed", "3")[1]
        assert a == b and len(a.strip().splitlines()) == 6


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "logconcave.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout

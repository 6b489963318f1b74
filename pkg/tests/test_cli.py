import json
import subprocess
import sys

import pytest

import pdedim.cli as cli
from pdedim.report import analyze as real_analyze

from conftest import DATA, GOLDEN


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "pdedim", *map(str, args)],
                          capture_output=True, text=True, cwd=cwd)


# --- golden files -------------------------------------------------------------


@pytest.mark.parametrize("fmt,golden", [("json", "heat_report.json"), ("text", "heat_report.txt")])
def test_heat_golden(fmt, golden):
    res = run("analyze", DATA / "heat.json", "--format", fmt)
    assert res.returncode == 0, res.stderr
    assert res.stdout == (GOLDEN / golden).read_text(encoding="utf-8")


def test_json_report_contents():
    doc = json.loads((GOLDEN / "heat_report.json").read_text(encoding="utf-8"))
    assert doc["schema_version"] == "pdedim-report/1"
    assert doc["result"] == {"p": 1, "sigma": 2}
    assert doc["cartan"]["orders"][0]["involutive"] is True
    assert all(c["status"] in ("pass", "skipped") for c in doc["cross_checks"])


def test_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("analyze", DATA / "heat.json", "--seed", 5, "--out", out).returncode == 0
    assert a.read_bytes() == b.read_bytes()


# --- exit codes ---------------------------------------------------------------


def test_bad_file_exits_2(tmp_path):
    doc = json.loads((DATA / "heat.json").read_text())
    doc["equations"][0]["terms"][0]["exponents"] = [2]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    res = run("analyze", bad)
    assert res.returncode == 2
    assert "equations[0].terms[0].exponents" in res.stderr


def test_invalid_json_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"schema\": ,\n}")
    res = run("analyze", bad)
    assert res.returncode == 2 and "line 2" in res.stderr


def test_usage_errors_exit_2():
    assert run("analyze").returncode == 2
    assert run("preset", "wave").returncode == 2
    assert run("preset", "symplectic", "--param", "n=3").returncode == 2
    assert run("preset", "laplace", "--param", "n").returncode == 2
    assert run("gci", "--n", 2, "--m", 2, "--orders", "1").returncode == 2
    assert run("lemma-check", "--n", 2).returncode == 2


def test_no_stabilization_exits_1():
    res = run("analyze", DATA / "heat.json", "--max-degree", 3)
    assert res.returncode == 1 and "--max-degree" in res.stderr


def test_resource_limit_exits_1():
    res = run("preset", "free", "--param", "n=4", "--param", "m=4", "--limit-basis", 100)
    assert res.returncode == 1 and "limit-basis" in res.stderr


def test_failed_cross_check_exits_1(monkeypatch, capsys):
    def broken(system, options):
        rep = real_analyze(system, options)
        rep.cross_checks[0] = {"name": "hilbert_fit_vs_resolution", "status": "fail", "detail": "1 != 2"}
        return rep

    monkeypatch.setattr(cli, "analyze", broken)
    assert cli.main(["analyze", str(DATA / "heat.json")]) == 1
    assert "hilbert_fit_vs_resolution" in capsys.readouterr().err


# --- preset, gci, lemma-check --------------------------------------------------


def test_preset_emit_round_trips(tmp_path):
    out = tmp_path / "sympl.json"
    assert run("preset", "symplectic", "--param", "n=2", "--emit", "--out", out).returncode == 0
    res = run("analyze", out)
    assert res.returncode == 0
    assert json.loads(res.stdout)["result"] == {"p": 2, "sigma": 1}


def test_preset_emit_matches_data_file():
    assert run("preset", "heat", "--emit").stdout == (DATA / "heat.json").read_text()


def test_preset_run_text():
    res = run("preset", "riemannian", "--run", "--format", "text")
    assert res.returncode == 0
    assert "functional rank sigma = 3" in res.stdout


def test_gci_subcommand():
    res = run("gci", "--n", 2, "--m", 1, "--orders", "2,2")
    assert res.returncode == 0
    assert json.loads(res.stdout) == {"n": 2, "m": 1, "orders": [2, 2], "d": 1, "r": 2, "p": 0, "sigma": 4}
    assert run("gci", "--n", 2, "--m", 1, "--orders", "2,2", "--d", 2, "--format", "text").stdout == \
        "r = 2, p = 0, sigma = 8\n"


def test_lemma_sweep_subcommand():
    res = run("lemma-check", "--sweep")
    doc = json.loads(res.stdout)
    assert res.returncode == 0 and doc["all_hold"] and len(doc["cases"]) == 48


def test_lemma_single_text():
    res = run("lemma-check", "--n", 2, "--m", 2, "--k", 1, "--format", "text")
    assert res.stdout.splitlines() == ["n=2 m=2 k=1: 3 = 3", "1/1 identities hold"]


def test_console_script_entry_point():
    res = subprocess.run(["pdedim", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "analyze" in res.stdout

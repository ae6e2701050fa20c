import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from repairloop.cli import CliConfig, main, make_parser, run

DATA = Path(__file__).parent / "data"


def invoke(*args):
    out, err = io.StringIO(), io.StringIO()
    ns = make_parser().parse_args(list(args))
    code = run(CliConfig(ns.model, ns.mu, ns.method, ns.format, ns.samples, ns.seed,
                         ns.tolerance), out, err)
    return code, out.getvalue(), err.getvalue()


def test_all_methods_json():
    code, out, err = invoke("--model", str(DATA / "series.json"), "--format", "json",
                            "--method", "all", "--samples", "20000")
    assert code == 0 and err == ""
    rep = json.loads(out)
    assert rep["mttf"] == pytest.approx(1.5, rel=1e-12)
    assert rep["results"]["fundamental-matrix"]["mttf"] == pytest.approx(1.5, rel=1e-12)
    assert rep["cross_check"]["max_relative_difference"] <= 1e-9
    assert rep["cross_check"]["monte_carlo_z_score"] < 4
    for key in ("model", "mu", "method", "methods", "mttf", "mttr", "availability",
                "unavailability", "holding_times", "absorption_probabilities", "residual",
                "cross_check", "warnings"):
        assert key in rep


@pytest.mark.parametrize("method", ["repair-loop", "fundamental", "monte-carlo"])
def test_single_method_has_no_cross_check(method):
    code, out, _ = invoke("--model", str(DATA / "competing.json"), "--format", "json",
                          "--method", method, "--samples", "5000")
    assert code == 0
    rep = json.loads(out)
    assert "cross_check" not in rep
    assert rep["absorption_probabilities"]["s2"] == pytest.approx(0.75, abs=0.05)


def test_golden_report(monkeypatch):
    monkeypatch.chdir(DATA)
    code, out, _ = invoke("--model", "series.json", "--format", "json", "--samples", "2000")
    assert code == 0
    assert out == (DATA / "series_report.golden.json").read_text()


def test_table_matches_json(capsys):
    code, table, err = invoke("--model", str(DATA / "unreachable.json"), "--method", "repair-loop")
    assert code == 0
    assert "warning: dropped unreachable states: s9" in err
    _, out, _ = invoke("--model", str(DATA / "unreachable.json"), "--method", "repair-loop",
                       "--format", "json")
    rep = json.loads(out)
    assert rep["warnings"] == ["dropped unreachable states: s9"]
    assert f"{rep['mttf']:.6g}" in table
    assert f"{rep['availability']:.6g}" in table


@pytest.mark.parametrize("doc, extra, code, needle", [
    ("absorbing_initial.json", [], 1, "MTTF is 0 by definition"),
    ("series.json", ["--mu", "0"], 1, "invalid-repair-rate"),
    ("trapped.json", [], 1, "infinite-mttf"),
    ("malformed.json", [], 2, "syntax-error"),
    ("does-not-exist.json", [], 2, "cannot read"),
    ("stiff.json", ["--tolerance", "1e-30", "--method", "repair-loop"], 3, "solver-failure"),
])
def test_error_exit_codes(doc, extra, code, needle):
    got, out, err = invoke("--model", str(DATA / doc), *extra)
    assert got == code
    assert out == ""
    assert needle in err


def test_argument_errors():
    with pytest.raises(SystemExit) as info:
        main(["--model", "x.json", "--samples", "0"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["--model", "x.json", "--method", "magic"])
    assert info.value.code == 2


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "repairloop", *args],
                          capture_output=True, cwd=DATA)


def test_repeated_invocations_byte_identical():
    args = ("--model", "competing.json", "--format", "json", "--samples", "3000", "--seed", "7")
    a, b = _cli(*args), _cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_process_exit_codes():
    assert _cli("--model", "absorbing_initial.json").returncode == 1
    assert _cli("--model", "malformed.json").returncode == 2
    assert _cli("--model", "stiff.json", "--tolerance", "1e-30").returncode == 3

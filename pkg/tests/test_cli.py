import io
import re
import subprocess
import sys

import pytest

from mofwe.cli import main
from mofwe.report import parse_curve_csv, parse_json

PARAMS = ["--alpha", "1", "--beta", "1", "--theta", "1"]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv", [
    ["fit", "--data", "aarset"],
    ["fit", "--data", "pumps", "--family", "weibull"],
    ["sample", "--n", "5", "--seed", "7", *PARAMS],
    ["eval", "--fn", "hazard", "--at", "2", *PARAMS],
    ["props", "--alpha", "0.2", "--beta", "0.3", "--theta", "2"],
    ["gof", "--data", "pumps"],
    ["gof", "--data", "aarset", "--params", "0.017", "0.401", "9.043", "--pvalue", "asymptotic"],
    ["compare", "--data", "pumps", "--include-paper-constants"],
    ["profile", "--data", "pumps", "--param", "theta", "--points", "5"],
    ["km", "--data", "aarset"],
    ["curves", "--data", "pumps", "--kind", "hazard", "--points", "16"],
])
def test_subcommands_succeed(argv):
    code, out, err = run(*argv)
    assert code == 0, err
    assert out


def test_eval_cdf():
    code, out, _ = run("eval", "--fn", "cdf", "--at", "1", *PARAMS)
    assert code == 0 and float(out) == pytest.approx(0.6321206, abs=1e-7)


def test_compare_aarset_row():
    code, out, _ = run("compare", "--data", "aarset", "--include-published")
    assert code == 0
    row = next(ln for ln in out.splitlines() if ln.split() and ln.split()[0] == "mofwe")
    assert "published" in out
    aic = [float(v) for v in re.findall(r"45\d\.\d+", row)]
    assert any(abs(v - 453.510) <= 0.05 for v in aic)


def test_fit_json_round_trip(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("fit", "--data", "aarset", "--seed", "5", "--json", str(a))[0] == 0
    assert run("fit", "--data", "aarset", "--seed", "5", "--json", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = parse_json(a.read_text())
    assert rep.dataset == "aarset" and rep.model("mofwe").converged


def test_sample_identical_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run("sample", "--n", "5", "--seed", "7", *PARAMS, "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 5
    assert run("sample", "--n", "5", "--seed", "8", *PARAMS)[1] != a.read_text()


def test_sample_feeds_fit(tmp_path):
    path = tmp_path / "draws.csv"
    run("sample", "--n", "200", "--seed", "11", "--alpha", "0.3", "--beta", "0.5", "--theta", "2", "--out", str(path))
    code, out, _ = run("fit", "--data", str(path))
    assert code == 0 and "dataset: draws" in out


def test_curve_outputs(tmp_path):
    code, out, _ = run("curves", "--data", "aarset", "--kind", "cdf", "--points", "33")
    assert len(out.splitlines()) == 34
    series = parse_curve_csv(out)
    assert series.kind == "cdf"
    code, out, _ = run("profile", "--data", "aarset", "--param", "alpha", "--from", "0.01", "--to", "0.03", "--points", "7")
    series = parse_curve_csv(out)
    assert series.kind == "profile" and len(series) == 7
    code, out, _ = run("km", "--data", "pumps")
    assert parse_curve_csv(out).kind == "km-step"


def test_exit_codes(tmp_path):
    assert run("nosuch")[0] == 2
    assert run("eval", "--fn", "cdf", "--at", "1", "--alpha", "1")[0] == 2
    assert run("eval", "--fn", "cdf", "--at", "1", "--alpha", "-1", "--beta", "1")[0] == 2
    assert run("fit", "--data", "nowhere")[0] == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("1\n-1\n")
    code, _, err = run("fit", "--data", str(bad))
    assert code == 3 and ":2:" in err
    assert run("compare", "--data", str(bad))[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mofwe", "eval", "--fn", "quantile", "--at", "0.5", *PARAMS],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert float(proc.stdout) == pytest.approx(0.83339634683573321593, rel=1e-12)
    proc = subprocess.run([sys.executable, "-m", "mofwe", "--bogus"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2 and "usage" in proc.stderr

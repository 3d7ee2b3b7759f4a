import json
import subprocess
import sys

import numpy as np
import pytest

from blockfd import cli
from blockfd.experiments import (ExperimentConfig, cmd_convergence, cmd_dg_check, cmd_phase_demo,
                                 cmd_stability, cmd_symbol_dump, fit_loglog, format_table,
                                 log_times, claimed_stable)
from blockfd.grid import build_grid
from blockfd.operators import SchemeParams, assemble_bfd, to_dense


@pytest.mark.parametrize("kw", [dict(N=(48, 48)), dict(N=(60, 48)), dict(scheme="weno"),
                                dict(L=0.0), dict(cfl=-1), dict(T=-1.0), dict(propagator="x"),
                                dict(fmt="xml"), dict(N=(2, 4, 8))])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        ExperimentConfig(**kw)


def test_labels():
    assert ExperimentConfig(scheme="fd", order=6).label == "fd6"
    assert ExperimentConfig(c1=1, c2=-0.5, post_process=True).label == "bfd(1,-0.5)+filter"


def test_fit_loglog():
    h = np.array([0.1, 0.05, 0.02, 0.01])
    s = fit_loglog(h, 7 * h**3)
    assert s.slope == pytest.approx(3.0) and s.residual < 1e-12 and s.accepted
    noisy = fit_loglog(h, 7 * h**3 * np.array([1, 3, 1, 3]))
    assert not noisy.accepted
    with pytest.raises(ValueError):
        fit_loglog(h[:2], h[:2])


def test_log_times():
    t = log_times(1e10, 0.1, 12)
    assert len(t) == 133 and t[0] == pytest.approx(0.1) and t[-1] == pytest.approx(1e10)
    assert np.allclose(np.diff(np.log10(t)), 1 / 12)


def test_convergence_small():
    r = cmd_convergence(ExperimentConfig(scheme="fd", order=2, N=(16, 24, 32, 48)))
    assert r.fit().slope == pytest.approx(2.0, abs=0.1)
    assert set(r.summary()) == {"label", "T", "l2", "linf"}


def test_convergence_excludes_blowup():
    cfg = ExperimentConfig(c1=-1.0, c2=1.0, T=30.0, N=(8, 12, 16, 24, 32))
    with pytest.warns(UserWarning, match="excluded"), pytest.raises(RuntimeError):
        cmd_convergence(cfg)


def test_phase_demo_at_zero_time():
    for p in cmd_phase_demo(ExperimentConfig(N=(32,), T=0.0)):
        assert p.linf_error < 1e-12 or "filter" in p.label


def test_stability_rows_agree_with_dense():
    rows = cmd_stability(lattice=5, N=8)
    assert len(rows) == 25
    assert all(r["stable"] == r["dense_stable"] for r in rows)
    assert [r["claimed_stable"] for r in rows] == [claimed_stable(r["c1"], r["c2"]) for r in rows]
    unstable_claimed = [r for r in rows if r["claimed_stable"] and not r["stable"]]
    assert all(r["c1"] + r["c2"] < 0 for r in unstable_claimed)


def test_dg_check():
    out = cmd_dg_check(0.3, -0.7, 0.05)
    assert out["passed"] and out["closed_form_deviation"] < 1e-12


@pytest.mark.parametrize("c1,c2", [(0, 0), (0.5, 0.5), (1, -0.5)])
def test_symbol_dump_against_dense(c1, c2):
    rows = cmd_symbol_dump(c1, c2, 8)
    assert len(rows) == 8 and rows[3]["omega"] == 0
    ev = np.linalg.eigvals(to_dense(assemble_bfd(build_grid(8, 1.0), SchemeParams(c1, c2))))
    for r in rows:
        for k in ("1", "2"):
            q = r[f"re_Q{k}"] + 1j * r[f"im_Q{k}"]
            assert np.min(np.abs(ev - q)) < 1e-10 * np.abs(ev).max()
    if c1 == c2 == 0:
        assert max(r["cos_theta"] for r in rows) < 1e-12


def test_format_table_csv_and_json():
    rows = [{"a": 1, "b": 0.1 + 0.2, "ok": True}]
    text = format_table(rows, {"x": 1})
    head, cols, line = text.splitlines()
    assert json.loads(head[2:]) == {"x": 1}
    assert cols == "a,b,ok" and line == "1,0.30000000000000004,True"
    data = json.loads(format_table(rows, {"x": 1}, "json"))
    assert data["rows"][0]["b"] == 0.1 + 0.2


def test_cli_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["convergence", "--scheme", "fd", "--order", "4", "--N", "16", "--N", "24", "--N", "32"]
    assert cli.run(args + ["--out", str(a)]) == 0
    assert cli.run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    meta = json.loads(a.read_text().splitlines()[0][2:])
    assert meta["fit"]["l2"]["slope"] == pytest.approx(4.0, abs=0.2)


@pytest.mark.parametrize("argv", [
    ["dg-check", "--c1", "0.25", "--c2", "-1"],
    ["symbol-dump", "--N", "8", "--format", "json"],
    ["stability", "--lattice", "3", "--N", "8"],
    ["phase-demo", "--T", "1"],
    ["long-time", "--N", "16", "--N", "24", "--N", "32", "--T", "10", "--post-process"],
    ["error-vs-time", "--N", "8", "--t-max", "10"],
    ["convergence", "--scheme", "dg-pen", "--c1", "1", "--c2", "1", "--N", "16", "--N", "24",
     "--N", "32", "--propagator", "modal"],
])
def test_cli_commands_succeed(argv, capsys):
    assert cli.run(argv) == 0
    out = capsys.readouterr().out
    assert out.startswith("#") or out.startswith("{")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "blockfd", "dg-check", "--c1", "1", "--c2", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and '"passed": true' in res.stdout


def test_cli_rejects_unknown_command():
    with pytest.raises(SystemExit):
        cli.run(["bogus"])

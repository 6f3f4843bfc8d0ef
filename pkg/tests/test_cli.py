import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hydrocs import cli

GOLDEN = Path(__file__).parent / "golden" / "basis_1_0_1.csv"


def run(*args):
    return subprocess.run([sys.executable, "-m", "hydrocs", *args], capture_output=True, text=True)


def test_parse_grid_order():
    X = cli.parse_grid("x1:0:1:2,x3:-1:1:3")
    assert X.shape == (6, 3)
    assert np.allclose(X[:3, 0], 0) and np.allclose(X[:3, 2], [-1, 0, 1])
    assert np.all(X[:, 1] == 0)


@pytest.mark.parametrize("bad", ["x4:0:1:2", "x1:0:1", "x1:a:1:2", "x1:0:1:0"])
def test_parse_grid_rejects(bad):
    with pytest.raises(cli.UsageError):
        cli.parse_grid(bad)


def test_parse_tol():
    tol = cli.parse_tol(["gram=1e-6"])
    assert tol.gram == 1e-6
    with pytest.raises(cli.UsageError):
        cli.parse_tol(["no_such_key=1"])
    with pytest.raises(cli.UsageError):
        cli.parse_tol(["gram"])


def test_golden_basis_csv(tmp_path):
    out = tmp_path / "b.csv"
    code = cli.main(["eval", "basis", "--label", "1,0,1", "--grid", "x1:-2:2:9,x2:0.5:0.5:1,x3:-2:2:9",
                     "--out", str(out)])
    assert code == 0
    assert out.read_bytes() == GOLDEN.read_bytes()
    assert b"\r" not in out.read_bytes()


def test_discrete_cs_vacuum_rows(capsys):
    assert cli.main(["eval", "discrete-cs", "--u", "0,0,0", "--grid", "x1:0.5:3:6"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x1,x2,x3,re,im,abs2"
    for line in lines[1:]:
        x1, _, _, _, _, abs2 = map(float, line.split(","))
        assert abs(abs2 - math.exp(-2 * x1) / math.pi) < 1e-15


def test_continuous_cs_unimodular(capsys):
    assert cli.main(["eval", "continuous-cs", "--v", "0.2,0.1,-0.3", "--grid", "x1:-1:1:3,x2:0:1:2,x3:1:2:2"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert len(rows) == 12
    assert all(abs(float(r.split(",")[-1]) - 1) < 1e-14 for r in rows)


def test_invalid_u_names_condition(capsys):
    assert cli.main(["eval", "discrete-cs", "--u", "0.6,0.6j,0", "--grid", "x1:0:1:2"]) == 2
    assert "validity condition" in capsys.readouterr().err


def test_exit_codes():
    assert run("verify", "--suite", "nope").returncode == 2
    assert run("verify", "--tol", "bogus=1").returncode == 2
    assert run("eval", "basis", "--label", "-1,0,0", "--grid", "x1:0:1:2").returncode == 2
    assert run("verify", "--suite", "robertson", "--samples", "5", "--seed", "7").returncode == 0
    # an impossible tolerance turns a passing suite into a failure
    assert run("verify", "--suite", "robertson", "--samples", "5", "--tol", "robertson_gap=0").returncode == 1


def test_verify_report_schema_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli.main(["verify", "--suite", "states", "--seed", "3", "--report", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert set(rep) == {"suite", "checks", "seed", "config"}
    assert rep["seed"] == 3 and rep["suite"] == "states"
    for c in rep["checks"]:
        assert set(c) == {"name", "paper_ref", "measured", "tolerance", "pass"}

"""Acceptance criteria 1-14, one line each.

The CLI runs the full suite twice; criterion 13 compares the two JSON reports
byte for byte and the rest are read from the first report. Run directly with
``python tests/test_acceptance.py`` for the summary alone.
"""

import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

TIME_LIMIT = 300.0

# criterion -> (title, checks that must all pass)
CRITERIA = {
    1: ("exact so(4,2) closure", ["closure[osc8]", "closure[param13]", "closure[param-cont2]", "closure[twistor3]"]),
    2: ("Fock constraint and L50 eigenvalues, n <= 5", ["fock-constraint", "fock-eigen-L50"]),
    3: ("annihilation identities", ["annihilation-exact", "annihilation-float"]),
    4: ("Gram matrix n <= 4", ["gram-identity"]),
    5: ("Schrodinger residuals", ["schrodinger-discrete", "schrodinger-continuous"]),
    6: ("series vs closed form and <u|u> = 1", ["series-vs-closed", "cs-norm"]),
    7: ("generating identities", ["bilinear-laguerre", "bessel-generating"]),
    8: ("Robertson equality", ["robertson-gap", "sigma-monte-carlo", "constraint-rank", "constraints"]),
    9: ("Mellin identity", ["mellin"]),
    10: ("L50 and L06 covariance", ["covariance-L50", "covariance-L06"]),
    11: ("intertwining", ["intertwining"]),
    12: ("kernel reductions", ["kernel-discrete", "kernel-continuous"]),
    14: ("packet normalization", ["packet-normalization"]),
}


def _run_cli(path: Path) -> float:
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-m", "hydrocs", "verify", "--suite", "all", "--seed", "7",
                    "--report", str(path)], capture_output=True, text=True)
    return time.perf_counter() - t0


def collect():
    with tempfile.TemporaryDirectory() as tmp:
        a, b = Path(tmp) / "a.json", Path(tmp) / "b.json"
        ta = _run_cli(a)
        tb = _run_cli(b)
        raw_a, raw_b = a.read_bytes(), b.read_bytes()
    checks = {c["name"]: c for c in json.loads(raw_a)["checks"]}
    results = {}
    for n, (title, names) in CRITERIA.items():
        rows = [checks[name] for name in names]
        detail = "  ".join(f"{r['name']}={r['measured']:.3g}/{r['tolerance']:.0e}" for r in rows)
        results[n] = (title, all(r["pass"] for r in rows), detail)
    same = raw_a == raw_b
    results[13] = ("determinism and wall time", same and max(ta, tb) < TIME_LIMIT,
                   f"identical={same}  wall={ta:.1f}s,{tb:.1f}s/{TIME_LIMIT:.0f}s")
    return dict(sorted(results.items()))


def format_line(n, title, ok, detail) -> str:
    return f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"


@pytest.fixture(scope="module")
def results():
    return collect()


def test_summary(results, capsys):
    with capsys.disabled():
        print()
        for n, (title, ok, detail) in results.items():
            print(format_line(n, title, ok, detail))


@pytest.mark.parametrize("n", range(1, 15))
def test_criterion(results, n):
    title, ok, detail = results[n]
    assert ok, format_line(n, title, ok, detail)


if __name__ == "__main__":
    res = collect()
    for n, (title, ok, detail) in res.items():
        print(format_line(n, title, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in res.values()) else 1)

"""Command-line front end: ``hydrocs verify`` and ``hydrocs eval``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import coherent, hydrogen
from .config import TOL
from .suites import SUITES, SuiteConfig, report, run

AXES = ("x1", "x2", "x3")
HEADER = "x1,x2,x3,re,im,abs2"


class UsageError(Exception):
    pass


def parse_tol(items):
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects KEY=VAL, got {item!r}")
        out[key.strip()] = value.strip()
    try:
        return TOL.override(out)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    except ValueError as exc:
        raise UsageError(f"bad tolerance value: {exc}") from None


def parse_grid(spec: str) -> np.ndarray:
    """"x1:a:b:n,x2:a:b:n,x3:a:b:n" -> (N, 3) points, x3 varying fastest.

    Axes that are not given are held at 0.
    """
    axes = {name: np.array([0.0]) for name in AXES}
    for part in spec.split(","):
        fields = part.strip().split(":")
        if len(fields) != 4 or fields[0] not in AXES:
            raise UsageError(f"bad grid axis {part!r}; expected NAME:a:b:n with NAME in x1, x2, x3")
        try:
            a, b, n = float(fields[1]), float(fields[2]), int(fields[3])
        except ValueError:
            raise UsageError(f"bad grid axis {part!r}") from None
        if n < 1:
            raise UsageError("grid axes need at least one point")
        axes[fields[0]] = np.linspace(a, b, n)
    mesh = np.meshgrid(*(axes[name] for name in AXES), indexing="ij")
    return np.column_stack([m.reshape(-1) for m in mesh])


def _vector(text: str, kind, length: int, flag: str):
    try:
        vals = [kind(t.strip()) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag}: could not parse {text!r}") from None
    if len(vals) != length:
        raise UsageError(f"{flag} needs {length} comma-separated values")
    return vals


def evaluate(kind: str, args, X: np.ndarray) -> np.ndarray:
    if kind == "discrete-cs":
        u = _vector(args.u or "0,0,0", complex, 3, "--u")
        try:
            coherent.validate_u(u)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return coherent.cs_discrete_closed(u, X)
    if kind == "continuous-cs":
        v = _vector(args.v or "0,0,0", float, 3, "--v")
        if abs(sum(c * c for c in v) - 1) < 1e-14:
            raise UsageError("v lies on the unit sphere (v.v = 1)")
        return coherent.cs_continuous_closed(v, X)
    label = _vector(args.label or "0,0,0", int, 3, "--label")
    if label[0] < 0 or label[1] < 0:
        raise UsageError("n1 and n2 must be non-negative")
    return hydrogen.psi_discrete(tuple(label), X, physical=args.physical)


def format_csv(X: np.ndarray, values: np.ndarray) -> str:
    lines = [HEADER]
    for x, val in zip(X, values):
        val = complex(val)
        row = (x[0], x[1], x[2], val.real, val.imag, abs(val) ** 2)
        # + 0.0 folds negative zeros
        lines.append(",".join(f"{float(c) + 0.0:.17g}" for c in row))
    return "\n".join(lines) + "\n"


def _write(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_verify(args) -> int:
    cfg = SuiteConfig(suite=args.suite, tol=parse_tol(args.tol), trunc=args.trunc, seed=args.seed,
                      samples=args.samples)
    checks = run(cfg)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<24} measured={c.measured:.3e}  tol={c.tolerance:.1e}")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    if args.report:
        _write(json.dumps(report(cfg, checks), indent=2, sort_keys=True) + "\n", args.report)
    return 0 if failed == 0 else 1


def cmd_eval(args) -> int:
    X = parse_grid(args.grid)
    _write(format_csv(X, evaluate(args.kind, args, X)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hydrocs", description="Hydrogen coherent-state verification tools")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--tol", action="append", metavar="KEY=VAL", help="override a named tolerance (repeatable)")
    v.add_argument("--trunc", type=int, default=40, help="series truncation N")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--samples", type=int, default=None, help="sample count for randomized sweeps")
    v.add_argument("--report", metavar="PATH", help="write a JSON report")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate states on a grid and write CSV")
    e.add_argument("kind", choices=("discrete-cs", "continuous-cs", "basis"))
    e.add_argument("--grid", required=True, help='e.g. "x1:-2:2:5,x2:0:0:1,x3:-2:2:5"')
    e.add_argument("--u", help="complex 3-vector, e.g. 0.1+0.2j,0.3,0")
    e.add_argument("--v", help="real 3-vector")
    e.add_argument("--label", help="n1,n2,m")
    e.add_argument("--physical", action="store_true", help="basis states in physical units (x/n)")
    e.add_argument("--out", metavar="PATH", help="CSV path (default stdout)")
    e.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

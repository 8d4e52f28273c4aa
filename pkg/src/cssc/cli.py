"""
cssc command line.

    cssc complexity --model oat --theta 0.1 --phi 0.2 --delta 0.01 --J 10 --t-max 5 --steps 100
    cssc squeeze --theta 0 --phi 0.1 --delta 0.01 --J 10 --t-max 3 --steps 50 --exact
    cssc verify all --seed 0

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
identity violation.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import complexity as cx
from . import dynamics as dy
from .so3 import RotationAngles, SmallAngleWarning
from .verification import SUITES, run_suite

MODELS = ("static", "spin-magnet", "oat", "lmg-iso", "lmg-frozen", "dicke")
COMPLEXITY_COLUMNS = ("t", "f1", "f2", "f3", "norm", "complexity")
SQUEEZE_COLUMNS = (
    "t", "varJy", "varJz", "corrYZ", "xi2_y", "xi2_z", "G_pair",
    "complexity_direct", "complexity_squeezing",
)
EXACT_COLUMNS = tuple(f"exact_{c}" for c in ("varJy", "varJz", "corrYZ", "xi2_y", "xi2_z", "G_pair"))
IDENTITY_TOL = 1e-12

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IDENTITY = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"cssc: error: {message}\n")


def _add_params(p):
    g = p.add_argument_group("model parameters")
    for name, default in (
        ("theta", 0.0), ("phi", 0.0), ("B", 1.0), ("Omega", 1.0), ("delta", 0.0),
        ("J", 1.0), ("lambda", 1.0), ("kappa", 1.0), ("alpha-r", 0.0), ("alpha-i", 0.0), ("omega", 1.0),
    ):
        g.add_argument(f"--{name}", type=float, default=default, dest=name.replace("-", "_"))
    g.add_argument("--N", type=int, default=None)
    g.add_argument("--n", type=int, default=0, help="branch index")
    t = p.add_argument_group("time grid")
    t.add_argument("--t-min", type=float, default=0.0)
    t.add_argument("--t-max", type=float, default=0.0)
    t.add_argument("--steps", type=int, default=1, help="number of grid points")
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser():
    parser = _Parser(prog="cssc", description="Nielsen complexity of coherent spin state operators")
    sub = parser.add_subparsers(dest="command", required=True)
    c = sub.add_parser("complexity", help="complexity over a time grid")
    c.add_argument("--model", choices=MODELS, required=True)
    _add_params(c)
    s = sub.add_parser("squeeze", help="one-axis twisting squeezing table")
    s.add_argument("--model", choices=("oat",), default="oat")
    s.add_argument("--exact", action="store_true", help="add exact spin-J evolution columns")
    _add_params(s)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=tuple(SUITES) + ("all",), nargs="?", default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=None, help="override every check tolerance")
    for p in (c, s, v):
        p.error = parser.error
    return parser


def _require(ok, field, message):
    if not ok:
        raise UsageError(field, message)


def time_grid(args):
    _require(args.steps >= 1, "steps", "must be >= 1")
    _require(args.t_max >= args.t_min, "t-max", "must be >= t-min")
    _require(math.isfinite(args.t_min) and math.isfinite(args.t_max), "t-min", "must be finite")
    return np.linspace(args.t_min, args.t_max, args.steps)


def _angles(args):
    _require(math.isfinite(args.theta), "theta", "must be finite")
    _require(math.isfinite(args.phi), "phi", "must be finite")
    return RotationAngles(args.theta, args.phi)


def _twisting(args):
    _require(args.Omega > 0, "Omega", "must be positive")
    _require(args.J > 0, "J", "must be positive")
    _require(args.Omega**2 + 4 * args.delta * args.Omega * args.J > 0, "delta", "frozen-spin frequency not real")
    return dy.TwistingParams(args.delta, args.Omega, args.J)


def _lmg(args, isotropic):
    _require(args.__dict__["lambda"] > 0, "lambda", "must be positive")
    _require(0 <= args.kappa <= 1, "kappa", "must lie in [0, 1]")
    _require(not isotropic or args.kappa == 1, "kappa", "lmg-iso requires kappa = 1")
    _require(args.B + args.__dict__["lambda"] * args.kappa > 0, "B", "B + lambda*kappa must be positive")
    _require(args.N is None or (args.N > 0 and args.N % 2 == 0), "N", "must be a positive even integer")
    return dy.LMGParams(args.__dict__["lambda"], args.kappa, args.B, args.N)


def _row(t, targets, result):
    f1, f2, f3 = targets
    return {"t": float(t), "f1": f1, "f2": f2, "f3": f3, "norm": result.norm, "complexity": result.value}


def complexity_rows(args):
    """One row per grid point (a single row for time-independent models)."""
    a = _angles(args)
    n = args.n
    model = args.model
    ts = time_grid(args)

    if model in ("static", "dicke"):
        if model == "dicke":
            _require(args.omega > 0, "omega", "must be positive")
            dp = cx.DickeParams(args.alpha_r, args.alpha_i, args.omega)
        res = cx.static_complexity(a, n)
        row = _row(ts[0], (0.0, a.theta, a.phi), res)
        if model == "dicke":
            row["complexity"] = cx.dicke_complexity(dp, a, n)
        return [row]

    if model == "spin-magnet":
        _require(math.isfinite(args.B), "B", "must be finite")

        def point(t):
            f, g = cx.class1_targets(a, args.B, t)
            return _row(t, (0.0, g, f), cx.class1_complexity(a, args.B, t, n))

    elif model == "oat":
        p = _twisting(args)

        def point(t):
            f, g = cx.oat_boundary_functions(a, p, t)
            return _row(t, (0.0, g, f), cx.oat_complexity(a, p, t, n))

    else:
        p = _lmg(args, model == "lmg-iso")

        def point(t):
            return _row(t, cx.lmg_targets(a, p, t), cx.lmg_complexity(a, p, t, n))

    return _map(point, ts)


def squeeze_rows(args):
    a = _angles(args)
    p = _twisting(args)
    ts = time_grid(args)
    if args.exact:
        twoj = 2 * Fraction(args.J)
        _require(twoj.denominator == 1, "J", "--exact needs a half-integer J")
        _require(twoj + 1 <= dy.MAX_DIM, "J", f"--exact needs 2J+1 <= {dy.MAX_DIM}")
        model = dy.OneAxisTwisting(p.delta, p.Omega)

    def point(t):
        rep = dy.squeezing_report(p, t)
        row = rep.as_dict()
        row["t"] = float(t)
        row["complexity_direct"] = cx.oat_complexity(a, p, t, args.n).value
        row["complexity_squeezing"] = cx.oat_complexity_via_squeezing(a, rep, p.J, args.n).value
        if args.exact:
            ex = dy.exact_squeezing(args.J, model, t).as_dict()
            for col in EXACT_COLUMNS:
                row[col] = ex[col[len("exact_"):]]
        return row

    rows = _map(point, ts)
    for row in rows:
        gap = abs(row["complexity_direct"] - row["complexity_squeezing"])
        if not gap <= IDENTITY_TOL:
            raise cx.IdentityViolation(f"t={row['t']!r}: complexity forms differ by {gap:.3g}")
    return rows


def _threads():
    cap = os.environ.get("CSSC_THREADS")
    if cap is None:
        return 1
    try:
        return max(1, int(cap))
    except ValueError:
        raise UsageError("CSSC_THREADS", f"not an integer: {cap!r}")


def _map(fn, ts):
    workers = _threads()
    if workers == 1 or len(ts) == 1:
        return [fn(t) for t in ts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves grid order regardless of completion order
        return list(pool.map(fn, ts))


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    # + 0.0 folds -0.0 into 0.0
    return format(float(v) + 0.0, ".17g")


def render(rows, columns, fmt) -> str:
    if fmt == "json":
        clean = [
            {c: (r[c] + 0.0 if not isinstance(r[c], float) or math.isfinite(r[c]) else None) for c in columns}
            for r in rows
        ]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallAngleWarning)
            if args.command == "complexity":
                _emit(render(complexity_rows(args), COMPLEXITY_COLUMNS, args.format), args.out)
            elif args.command == "squeeze":
                cols = SQUEEZE_COLUMNS + (EXACT_COLUMNS if args.exact else ())
                _emit(render(squeeze_rows(args), cols, args.format), args.out)
            else:
                reports = run_suite(args.suite, seed=args.seed, tol=args.tol)
                for rep in reports:
                    sys.stdout.write(json.dumps(rep.as_dict()) + "\n")
                    if not rep.passed:
                        sys.stderr.write(
                            f"FAIL {rep.check}: deviation {rep.max_deviation:.3g} > tolerance {rep.tolerance:.3g}\n"
                        )
                return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY
    except UsageError as exc:
        sys.stderr.write(f"cssc: error: {exc}\n")
        return EXIT_USAGE
    except cx.IdentityViolation as exc:
        sys.stderr.write(f"cssc: identity violation: {exc}\n")
        return EXIT_IDENTITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

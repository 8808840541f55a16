"""Batch command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import verify as verify_mod
from .errors import InvalidTime, InvalidTimeOrder, NoConvergence, NonPositiveRecurrence, QMeixnerError
from .markov import (
    BUILTINS,
    convergence_study,
    generator_fd,
    generator_poly,
    generator_poly_basis,
    generator_smooth,
)
from .poly import Poly
from .qnum import ProcessParams
from .simulate import simulate_paths
from .spectra import fmt, moments, nu_measure, transition_measure

OUTPUT_DIR_ENV = "QMEIXNER_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _add_params(p, x=True):
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--theta", type=float, default=0.3)
    p.add_argument("--tau", type=float, default=0.2)
    if x:
        p.add_argument("--x", type=float, default=0.4)


def _add_output(p):
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--output", "-o", default=None, help="file path; relative paths resolve under $" + OUTPUT_DIR_ENV)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmeixner", description="q-Meixner transition measures and generators")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="Gauss rule of P_{s,t}(x,.) or nu_{x,t}")
    p.add_argument("--kind", choices=["transition", "nu"], default="transition")
    _add_params(p)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n", type=int, default=64)
    _add_output(p)

    p = sub.add_parser("moments", help="raw and central moments of a measure")
    p.add_argument("--kind", choices=["transition", "nu"], default="transition")
    _add_params(p)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--kmax", type=int, default=4)
    _add_output(p)

    p = sub.add_parser("generator", help="generator applied to a polynomial or a builtin smooth function")
    _add_params(p)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n", type=int, default=64)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", type=_floats, help="monomial coefficients c0,c1,...")
    g.add_argument("--builtin", choices=sorted(BUILTINS))
    p.add_argument("--method", choices=["integral", "basis", "fd"], default="integral")
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--side", choices=["left", "right"], default="right")
    _add_output(p)

    p = sub.add_parser("verify", help="run the identity suites over a parameter grid")
    p.add_argument("--q", type=_floats, default=None)
    p.add_argument("--theta", type=_floats, default=None)
    p.add_argument("--tau", type=_floats, default=None)
    p.add_argument("--x", type=_floats, default=None)
    p.add_argument("--only", action="append", choices=sorted(verify_mod.SUITES), default=None)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--output", "-o", default=None)

    p = sub.add_parser("converge", help="moment errors of the rescaled measure along an h sweep")
    _add_params(p)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--h-sweep", type=_floats, default=[1e-1, 1e-2, 1e-3])
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--n", type=int, default=32)
    _add_output(p)

    p = sub.add_parser("simulate", help="seeded paths from discretized kernels")
    _add_params(p, x=False)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--times", type=_floats, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p.add_argument("--paths", type=int, default=10_000)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    return parser


def _params(args):
    try:
        return ProcessParams(args.q, args.theta, args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(obj):
    def default(v):
        if isinstance(v, np.floating):
            return float(v)
        if isinstance(v, np.ndarray):
            return v.tolist()
        raise TypeError(type(v))

    return json.dumps(obj, default=default) + "\n"


def _measure(args):
    params = _params(args)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.kind == "nu":
        return nu_measure(params, args.x, args.t, args.n)
    return transition_measure(params, args.x, args.s, args.t, args.n)


def cmd_measure(args):
    m = _measure(args)
    return m.to_csv() if args.format == "csv" else m.to_json() + "\n"


def cmd_moments(args):
    m = _measure(args)
    if args.kmax > m.exact_degree:
        raise UsageError(f"--kmax {args.kmax} exceeds exactness degree {m.exact_degree} of an N={args.n} rule")
    raw = moments(m, args.kmax)
    mean = raw[1] if args.kmax >= 1 else m.mean()
    central = np.array([m.weights @ (m.nodes - mean) ** k for k in range(args.kmax + 1)])
    if args.format == "csv":
        return _csv(["order", "raw", "central"], [(k, float(raw[k]), float(central[k])) for k in range(args.kmax + 1)])
    return _json({"orders": list(range(args.kmax + 1)), "raw": raw, "central": central})


def cmd_generator(args):
    params = _params(args)
    if args.poly is not None:
        p = Poly(args.poly)
        if args.method == "integral":
            value = generator_poly(p, params, args.x, args.t, max(args.n, (p.degree + 3) // 2))
        elif args.method == "basis":
            value = generator_poly_basis(p, params, args.x, args.t)
        else:
            value = generator_fd(p, params, args.x, args.t, args.h, args.n, args.side)
        label = "poly"
    else:
        f = BUILTINS[args.builtin]()
        if args.method == "fd":
            value = generator_fd(f.f, params, args.x, args.t, args.h, args.n, args.side)
        elif args.method == "integral":
            value = generator_smooth(f, params, args.x, args.t, args.n)
        else:
            raise UsageError("--method basis needs --poly")
        label = args.builtin
    if args.format == "csv":
        return _csv(["function", "method", "x", "t", "value"], [(label, args.method, args.x, args.t, float(value))])
    return _json({"function": label, "method": args.method, "x": args.x, "t": args.t, "value": value})


def cmd_converge(args):
    params = _params(args)
    hs = args.h_sweep
    if any(h <= 0 for h in hs) or any(b >= a for a, b in zip(hs, hs[1:])):
        raise UsageError("--h-sweep must be positive and strictly decreasing")
    if args.side == "left" and max(hs) >= args.t:
        raise UsageError("left side needs every h < t")
    res = convergence_study(params, args.x, args.t, hs, args.kmax, args.side, args.n)
    if args.format == "csv":
        rows = []
        for i, h in enumerate(res["h"]):
            for j, k in enumerate(res["orders"]):
                rows.append((args.side, h, k, res["rescaled"][i][j], res["nu"][j], res["errors"][i][j]))
        slopes = ", ".join(f"m{k}={s:.4g}" for k, s in zip(res["orders"], res["slopes"]))
        print(f"fitted log-log slopes: {slopes}", file=sys.stderr)
        return _csv(["side", "h", "order", "rescaled_moment", "nu_moment", "abs_error"], rows)
    res["slopes"] = [s if np.isfinite(s) else None for s in res["slopes"]]
    return _json(res)


def cmd_simulate(args):
    params = _params(args)
    if args.paths < 1:
        raise UsageError("--paths must be positive")
    times = np.array(args.times)
    if len(times) < 1 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise UsageError("--times must be strictly increasing and nonnegative")
    ps = simulate_paths(params, args.x0, times, args.paths, args.n, args.seed)
    return ps.to_csv() if args.format == "csv" else ps.to_json() + "\n"


def cmd_verify(args):
    grid = verify_mod.default_grid()
    for name in ("q", "theta", "tau", "x"):
        vals = getattr(args, name)
        if vals:
            grid[name] = vals
    try:
        for q, tau in itertools.product(grid["q"], grid["tau"]):
            ProcessParams(q, 0.0, tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = verify_mod.run_suites(grid, only=args.only, N=args.n)
    return _json(report), (0 if report["pass"] else 1)


COMMANDS = {
    "measure": cmd_measure,
    "moments": cmd_moments,
    "generator": cmd_generator,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "simulate": cmd_simulate,
}


def _write(text, output):
    if output is None:
        sys.stdout.write(text)
        return
    path = Path(output)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
    except (UsageError, InvalidTime, InvalidTimeOrder) as exc:
        print(f"qmeixner {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, NonPositiveRecurrence, QMeixnerError, ArithmeticError) as exc:
        print(f"qmeixner {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"qmeixner {args.command}: error: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _write(result, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 on success, 1 when a computation fails (or ``verify`` finds a
failing check), 2 on bad usage.  Failures print one line of the form
``error kind=<Name> message="<text>"`` to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import acceptance, bendsolve, ptorus
from .bendsolve import BendingAngles
from .errors import BendLabError, NotCritical
from .lab import render, sweeps
from .minima import Weights, kerckhoff_minimum, line_of_minima


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _diag(kind: str, message: str) -> str:
    text = " ".join(str(message).split()).replace('"', "'")
    return f'error kind={kind} message="{text}"'


def parse_grid(text: str | None, default, integer: bool = False):
    """``LO:HI:N`` for N log-spaced values, or a comma-separated list."""
    if text is None:
        return list(default)
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            vals = np.geomspace(float(lo), float(hi), int(n))
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    if len(vals) == 0:
        raise UsageError(f"empty grid {text!r}")
    if integer:
        out = []
        for v in vals:
            n = int(round(float(v)))
            if not out or out[-1] != n:
                out.append(n)
        return out
    return [float(v) for v in vals]


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _table(rows: list[tuple[str, float]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {_fmt(v)}" for k, v in rows)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--tol", type=float, default=1e-5, help="relative criticality tolerance for minima")
    p.add_argument("--grid", default=None, help="LO:HI:N (log-spaced) or a comma-separated list")
    p.add_argument("--out", default=None, help="output path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bendlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="geometry of one pair of bending angles")
    p.add_argument("--theta-alpha", type=float, required=True)
    p.add_argument("--theta-beta", type=float, required=True)
    _common(p)

    for name, help_text in (("sweep", "theta sweep at fixed weights (CSV)"), ("diagonal", "diagonal sequence with drifting weights (CSV)")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--a", type=float, default=1.0)
        p.add_argument("--b", type=float, default=1.0)
        _common(p)

    p = sub.add_parser("diverge", help="theta_beta = theta_alpha**k sweep and slope fit (CSV)")
    p.add_argument("--k", type=float, default=1.5)
    _common(p)

    p = sub.add_parser("minimize", help="minimum of a*l_alpha + b*l_beta")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    _common(p)

    p = sub.add_parser("line", help="minima of a*l_alpha + t*b*l_beta over a grid of t")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("render", help="limit set as a binary PPM")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--triple", default=None, help="real Fuchsian trace triple x,y,z")
    src.add_argument("--angles", default=None, help="bending angles theta_alpha,theta_beta")
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int, default=512)
    p.add_argument("--window", default="-2,2,-2,2", help="xmin,xmax,ymin,ymax")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--epsilon", type=float, default=1e-3)
    _common(p)

    p = sub.add_parser("verify", help="run every acceptance check")
    _common(p)
    return parser


def _emit_csv(records, out) -> None:
    text = sweeps.records_to_csv(records)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"{what} must be {n} comma-separated numbers, got {text!r}")
    return vals


def _check_critical(report, tol: float) -> None:
    if report.criticality > tol * (1 + report.value):
        raise NotCritical(f"minimum is not critical: derivative {report.criticality:.3g} exceeds {tol:g}(1 + value)")


def cmd_solve(args) -> int:
    a = BendingAngles(args.theta_alpha, args.theta_beta)
    rec = sweeps.make_record(math.nan, a)
    rec.check()
    rows = [(k, getattr(rec, k)) for k in sweeps.COLUMNS if k not in ("theta", "dist_to_minimum")]
    print(_table(rows))
    return 0


def cmd_sweep(args) -> int:
    grid = parse_grid(args.grid, sweeps.DEFAULT_GRID)
    _emit_csv(sweeps.sweep_theta(Weights(args.a, args.b), grid), args.out)
    return 0


def cmd_diagonal(args) -> int:
    grid = parse_grid(args.grid, sweeps.DEFAULT_N_GRID, integer=True)
    _emit_csv(sweeps.diagonal_sweep(Weights(args.a, args.b), grid), args.out)
    return 0


def cmd_diverge(args) -> int:
    grid = parse_grid(args.grid, sweeps.DEFAULT_GRID)
    res = sweeps.divergence_sweep(grid, args.k)
    _emit_csv(res.records, args.out)
    f = res.fit
    print(
        f"# slope {_fmt(f.slope)} intercept {_fmt(f.intercept)} r2 {_fmt(f.r_squared)} "
        f"n {f.n_points} expected {_fmt(1 - args.k)} cosh_d_minus_one {_fmt(res.cosh_d_minus_one)}",
        file=sys.stderr if args.out is None else sys.stdout,
    )
    return 0


def cmd_minimize(args) -> int:
    r = kerckhoff_minimum(Weights(args.a, args.b))
    _check_critical(r, args.tol)
    t = r.point.triple()
    # the minimum is on the fold, where z = xy/2 exactly; recomputing z from the
    # nearly vanishing discriminant would cost half the digits
    print(
        _table(
            [
                ("l_alpha", r.l_alpha),
                ("l_beta", r.l_beta),
                ("x", t.x.real),
                ("y", t.y.real),
                ("z", t.x.real * t.y.real / 2),
                ("value", r.value),
                ("criticality", r.criticality),
            ]
        )
    )
    return 0


def cmd_line(args) -> int:
    grid = parse_grid(args.grid, np.geomspace(0.1, 10.0, 9))
    reports = line_of_minima(Weights(args.a, args.b), grid)
    lines = ["t,l_alpha,l_beta,x,y,value,criticality"]
    for t, r in zip(grid, reports):
        _check_critical(r, args.tol)
        tr = r.point.triple()
        lines.append(",".join(_fmt(v) for v in (t, r.l_alpha, r.l_beta, tr.x.real, tr.y.real, r.value, r.criticality)))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def cmd_render(args) -> int:
    if args.out is None:
        raise UsageError("render needs --out")
    if args.angles is not None:
        ta, tb = _floats(args.angles, 2, "--angles")
        G = bendsolve.group_from_bending(BendingAngles(ta, tb))
    else:
        x, y, z = _floats(args.triple or "3,3,3", 3, "--triple")
        G = ptorus.group_from_triple(ptorus.TraceTriple(x, y, z))
    try:
        spec = render.ImageSpec(args.width, args.height, tuple(_floats(args.window, 4, "--window")), args.depth, args.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = render.render_limit_set(G, spec, args.out)
    print(f"wrote {res.path} ({res.points.size} points in window, {res.n_enumerated} words)")
    return 0


def cmd_verify(args) -> int:
    results = acceptance.run_all(seed=args.seed)
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "diagonal": cmd_diagonal,
    "diverge": cmd_diverge,
    "minimize": cmd_minimize,
    "line": cmd_line,
    "render": cmd_render,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(_diag("UsageError", exc), file=sys.stderr)
        return 2
    except BendLabError as exc:
        print(_diag(exc.kind, exc), file=sys.stderr)
        return 1
    except ValueError as exc:
        # bad parameter values (negative weights, out-of-range flags)
        print(_diag("InvalidArgument", exc), file=sys.stderr)
        return 2
    except OSError as exc:
        print(_diag("IoError", exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

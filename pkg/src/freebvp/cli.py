"""Command-line front end: ``freebvp {solve,converge,exact,compare}``.

Exit status is 0 on success, 1 for invalid input and 2 when the solver fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import _accel
from .convergence import SELF, Reference, observed_orders, run_study
from .errors import FreeBVPError, InfiniteOrder, NoClosedForm, SolverError
from .problems import (
    ReactorParams,
    StringParams,
    make_dynamical,
    make_na_variant,
    make_reactor,
    make_string,
    na_variant_slope_exact,
    string_exact,
)
from .solver import SolverConfig, solve_scalar

PROBLEMS = ("string", "dynamical", "na-variant", "reactor")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2

# published comparison rows for the reactor benchmark: (u(0), du/dx(0), s)
PUBLISHED_REACTOR = (
    ("iterative TM (published)", (0.831280, -1.012298, 5.121648)),
    ("shooting method (published)", (0.831274, -1.012354, 5.119832)),
    ("non-iterative TM (published)", (0.831274, -1.012354, 5.119832)),
)
COMPARE_DX = -0.0001953125


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def fmt(value, digits=9):
    """Fixed decimals for ordinary magnitudes, 3-digit scientific for tiny ones."""
    if value is None:
        return ""
    if value == 0 or abs(value) >= 1e-3:
        return f"{value:.{digits}f}"
    return f"{value:.2e}"


def fmt_err(value):
    return "" if value is None else f"{value:.2e}"


def render_table(header, rows):
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)
    return "\n".join(lines)


def build_problem(args):
    name = args.problem
    if name == "string":
        return make_string(StringParams(args.theta, args.u0, args.length, args.span))
    if name == "dynamical":
        return make_dynamical()
    if name == "na-variant":
        return make_na_variant()
    return make_reactor(ReactorParams(args.npe, args.r, args.n, args.tau))


def write_trajectory_csv(sol, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x", "u", "du"])
    for x, (u, du) in zip(sol.x, sol.states):
        w.writerow([repr(float(x)), repr(float(u)), repr(float(du))])


def write_study_csv(study, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["dx", "u0", "du0", "s", "e_r_du0", "e_r_s"])
    for row in study.rows:
        w.writerow([
            repr(row.dx), repr(row.u0), repr(row.du0), repr(row.s),
            "" if row.e_r_du0 is None else repr(row.e_r_du0),
            "" if row.e_r_s is None else repr(row.e_r_s),
        ])


def _config(args, dx):
    return SolverConfig(dx=dx, s_star=args.sstar, max_steps=args.max_steps,
                        refine_event=args.refine_event)


def cmd_solve(args, out):
    p = build_problem(args)
    sol = solve_scalar(p, _config(args, args.dx))
    d = args.digits
    print(f"problem = {p.name}", file=out)
    print(f"dx = {args.dx:.10g}", file=out)
    print(f"s = {fmt(sol.s, d)}", file=out)
    print(f"u(0) = {fmt(sol.u0, d)}", file=out)
    print(f"du/dx(0) = {fmt(sol.du0, d)}", file=out)
    print(f"residual0 = {sol.residual0:.2e}", file=out)
    print(f"last step = {sol.event.dx0_star:.{d}g} (mesh step {args.dx:.10g}, {sol.event.k} steps)",
          file=out)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_trajectory_csv(sol, fh)
        print(f"trajectory written to {args.out}", file=out)
    return EXIT_OK


def _study_reference(args):
    if args.problem == "string":
        ex = string_exact(StringParams(args.theta, args.u0))
        return Reference(ex.du0_exact, ex.s_exact, note="closed-form exact solution")
    return SELF


def cmd_converge(args, out):
    p = build_problem(args)
    levels = args.levels if args.levels is not None else (7 if args.problem == "string" else 10)
    study = run_study(p, args.dx, levels, reference=_study_reference(args),
                      config=_config(args, args.dx))
    d = args.digits
    if args.format == "csv":
        write_study_csv(study, out)
    else:
        header = ["dx", "u(0)", "du/dx(0)", "e_r", "s", "e_r"]
        rows = [[f"{r.dx:.10g}", fmt(r.u0, d), fmt(r.du0, d), fmt_err(r.e_r_du0),
                 fmt(r.s, d), fmt_err(r.e_r_s)] for r in study.rows]
        print(f"problem: {study.label}", file=out)
        print(render_table(header, rows), file=out)
        print(f"reference: {study.reference.note}", file=out)
        for field in ("du0", "s"):
            try:
                orders = observed_orders(study, field)
                text = " ".join(f"{o:.2f}" for o in orders)
            except InfiniteOrder:
                text = "inf (zero error)"
            except FreeBVPError as err:
                text = f"n/a ({err})"
            print(f"observed orders e_r({field}): {text}", file=out)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_study_csv(study, fh)
    return EXIT_OK


def cmd_exact(args, out):
    d = args.digits
    if args.problem == "string":
        ex = string_exact(StringParams(args.theta, args.u0))
        print(f"s = {fmt(ex.s_exact, d)}", file=out)
        print(f"du/dx(0) = {fmt(ex.du0_exact, d)}", file=out)
    elif args.problem == "na-variant":
        print(f"|du/dx(0)| = {fmt(na_variant_slope_exact(), d)}", file=out)
    else:
        raise NoClosedForm(f"no closed form for problem {args.problem!r}")
    return EXIT_OK


def cmd_compare(args, out):
    dx = args.dx if args.dx is not None else COMPARE_DX
    sol = solve_scalar(make_reactor(ReactorParams(args.npe, args.r, args.n, args.tau)),
                       _config(args, dx))
    rows = [[label, *(f"{v:.6f}" for v in values)] for label, values in PUBLISHED_REACTOR]
    rows.append([f"this solver (dx = {dx:.10g})", f"{sol.u0:.6f}", f"{sol.du0:.6f}", f"{sol.s:.6f}"])
    print(render_table(["method", "u(0)", "du/dx(0)", "s"], rows), file=out)
    return EXIT_OK


def _add_problem_args(sp, dx_default):
    sp.add_argument("--problem", required=True, choices=PROBLEMS)
    sp.add_argument("--theta", type=float, default=0.1, help="string: theta > 0")
    sp.add_argument("--u0", type=float, default=1.0, help="string: left height u0 > 0")
    sp.add_argument("--length", type=float, default=None, help="string: length L (feasibility only)")
    sp.add_argument("--span", type=float, default=None, help="string: span b (feasibility only)")
    sp.add_argument("--npe", type=float, default=6.0, help="reactor: Peclet group")
    sp.add_argument("--r", type=float, default=2.0, help="reactor: reaction rate group")
    sp.add_argument("--n", type=float, default=2.0, help="reactor: reaction order")
    sp.add_argument("--tau", type=float, default=0.1, help="reactor: exit residual fraction")
    _add_solver_args(sp, dx_default)


def _add_solver_args(sp, dx_default):
    sp.add_argument("--dx", type=float, default=dx_default, help="signed step, negative")
    sp.add_argument("--sstar", type=float, default=0.0, help="starred right boundary")
    sp.add_argument("--max-steps", type=int, default=10**6)
    sp.add_argument("--refine-event", action="store_true",
                    help="iterate the final-step interpolation to a zero residual")
    sp.add_argument("--digits", type=int, default=9, help="decimals printed")


def build_parser():
    parser = _Parser(prog="freebvp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s 0.1.0 ({_accel.BACKEND} backend)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="solve one problem at one step size")
    _add_problem_args(sp, -0.1)
    sp.add_argument("--out", help="write the trajectory (x,u,du) as CSV")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("converge", help="step-halving convergence study")
    _add_problem_args(sp, -0.1)
    sp.add_argument("--levels", type=int, default=None)
    sp.add_argument("--format", choices=("text", "csv"), default="text")
    sp.add_argument("--out", help="also write the study as CSV")
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("exact", help="closed-form reference values")
    _add_problem_args(sp, -0.1)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("compare", help="reactor result against published values")
    sp.add_argument("--npe", type=float, default=6.0)
    sp.add_argument("--r", type=float, default=2.0)
    sp.add_argument("--n", type=float, default=2.0)
    sp.add_argument("--tau", type=float, default=0.1)
    _add_solver_args(sp, None)
    sp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.digits < 1:
            raise UsageError(f"--digits must be >= 1, got {args.digits}")
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"freebvp: solver failed: {exc}", file=err)
        return EXIT_SOLVER
    except (FreeBVPError, OSError) as exc:
        print(f"freebvp: error: {exc}", file=err)
        return EXIT_VALIDATION


def run_to_string(argv):
    """Run the CLI in-process; returns ``(status, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    status = main(argv, out, err)
    return status, out.getvalue(), err.getvalue()

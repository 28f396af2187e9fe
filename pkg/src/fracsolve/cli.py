"""Command-line front end.

Four subcommands: `ml` evaluates the Mittag-Leffler function, `relax` and
`subdiff` run single solves and write plot-ready delimited series, and
`converge` runs a step-halving convergence study.  Exit status is 0 on
success, 2 on usage or domain errors, 1 on numerical failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import problems, relaxation, subdiffusion
from .caputo import Scheme
from .harness import (Coupling, Ladder, render_report, run_relaxation_study,
                      run_subdiffusion_study)
from .relaxation import RelaxationProblem, choose_m
from .specfun import ConvergenceError, SeriesPolicy, mittag_leffler, ml_relaxation_exact
from .subdiffusion import SineMode, SubdiffusionProblem

__all__ = ["build_parser", "run", "main"]


def _positive(text: str) -> float:
    value = float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"{text} is not positive")
    return value


def _alpha_open(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {text}")
    return value


def _alpha_closed(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1], got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsolve",
        description="Fractional relaxation and subdiffusion solvers "
                    "(L1 / modified-L1 schemes with start-up correction).")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    fmt = argparse.ArgumentDefaultsHelpFormatter

    p_ml = sub.add_parser("ml", formatter_class=fmt,
                          help="evaluate the Mittag-Leffler function E_{alpha,beta}(x)")
    p_ml.add_argument("--alpha", type=_alpha_closed, required=True,
                      help="series parameter alpha in (0, 1]")
    p_ml.add_argument("--beta", type=_positive, default=1.0,
                      help="series parameter beta > 0")
    p_ml.add_argument("--x", type=float, required=True, help="argument, |x| <= 50")
    p_ml.add_argument("--rel-tol", type=_positive, default=1e-15,
                      help="series truncation tolerance")
    p_ml.add_argument("--max-terms", type=_positive_int, default=10_000,
                      help="series term budget")
    p_ml.set_defaults(func=_cmd_ml)

    p_relax = sub.add_parser("relax", formatter_class=fmt,
                             help="solve one fractional relaxation problem")
    p_relax.add_argument("--problem", choices=problems.RELAXATION_IDS,
                         default="relax-mlexact", help="built-in problem id")
    p_relax.add_argument("--alpha", type=_alpha_open, default=None,
                         help="derivative order (required for relax-mlexact)")
    p_relax.add_argument("--B", type=_positive, default=None,
                         help="decay coefficient (relax-mlexact only)")
    p_relax.add_argument("--scheme", choices=["l1", "ml1"], default="l1",
                         help="time discretization")
    p_relax.add_argument("--h", type=_positive, required=True, help="step size")
    p_relax.add_argument("--T", type=_positive, default=1.0, help="interval end")
    p_relax.add_argument("--correct", type=int, nargs="?", const=0, default=None,
                         metavar="M",
                         help="apply the start-up correction of degree M "
                              "(omit M to pick the smallest valid degree)")
    p_relax.add_argument("--out", type=Path, default=None,
                         help="output file (default: stdout)")
    p_relax.set_defaults(func=_cmd_relax)

    p_sub = sub.add_parser("subdiff", formatter_class=fmt,
                           help="solve one subdiffusion problem on [0, pi]")
    p_sub.add_argument("--problem", choices=problems.SUBDIFFUSION_IDS, default=None,
                       help="built-in problem id (fixes alpha)")
    p_sub.add_argument("--alpha", type=_alpha_open, default=None,
                       help="derivative order (when no --problem is given)")
    p_sub.add_argument("--scheme", choices=["l1", "ml1"], default="l1",
                       help="time discretization")
    p_sub.add_argument("--tau", type=_positive, required=True, help="time step")
    p_sub.add_argument("--T", type=_positive, default=1.0, help="final time")
    p_sub.add_argument("--N", type=_positive_int, default=None,
                       help="space intervals (default: 3 T / tau, i.e. h = pi tau / 3)")
    p_sub.add_argument("--correct", type=int, nargs="?", const=0, default=None,
                       metavar="M",
                       help="apply the start-up correction of degree M "
                            "(omit M to pick the smallest valid degree)")
    p_sub.add_argument("--out", type=Path, default=None,
                       help="output file (default: stdout)")
    p_sub.set_defaults(func=_cmd_subdiff)

    p_conv = sub.add_parser("converge", formatter_class=fmt,
                            help="run a step-halving convergence study")
    p_conv.add_argument("--problem", choices=problems.PROBLEM_IDS, required=True,
                        help="built-in problem id")
    p_conv.add_argument("--alpha", type=_alpha_open, default=None,
                        help="derivative order (relax-mlexact only)")
    p_conv.add_argument("--B", type=_positive, default=None,
                        help="decay coefficient (relax-mlexact only)")
    p_conv.add_argument("--scheme", choices=["l1", "ml1"], default="l1",
                        help="time discretization")
    p_conv.add_argument("--h0", type=_positive, default=0.05,
                        help="base step of the halving ladder")
    p_conv.add_argument("--levels", type=_positive_int, default=5,
                        help="number of halvings (>= 2)")
    p_conv.add_argument("--correct", type=int, nargs="?", const=0, default=None,
                        metavar="M",
                        help="study the corrected solver of degree M "
                             "(omit M to pick the smallest valid degree)")
    p_conv.add_argument("--format", choices=["csv", "markdown", "jsonl"],
                        default="csv", help="report format")
    p_conv.add_argument("--out", type=Path, default=None,
                        help="output file (default: stdout)")
    p_conv.set_defaults(func=_cmd_converge)

    return parser


def _scheme(args) -> Scheme:
    return Scheme(args.scheme)


def _resolve_correct(value: int | None, alpha: float):
    """Map the --correct flag to (corrected, m): absent, automatic, or fixed."""
    if value is None:
        return False, None
    if value == 0:
        return True, choose_m(alpha)
    if value < 1:
        raise ValueError(f"--correct must be a positive degree, got {value}")
    return True, value


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _series_table(x: np.ndarray, values: np.ndarray, exact: np.ndarray) -> str:
    lines = ["x,value,exact,error"]
    for xi, vi, ei in zip(x, values, exact):
        lines.append(f"{xi:.17g},{vi:.17g},{ei:.17g},{abs(vi - ei):.17g}")
    return "\n".join(lines) + "\n"


def _cmd_ml(args) -> int:
    policy = SeriesPolicy(rel_tol=args.rel_tol, max_terms=args.max_terms)
    value = mittag_leffler(args.alpha, args.beta, args.x, policy)
    print(repr(value))
    return 0


def _cmd_relax(args) -> int:
    family = problems.relaxation_family(args.problem, alpha=args.alpha, B=args.B)
    corrected, m = _resolve_correct(args.correct, family.alpha)
    scheme = _scheme(args)
    if corrected:
        if family.forcing is not None or family.y0 != 1.0:
            raise ValueError(
                f"correction applies to the homogeneous problem only, "
                f"not {family.name}")
        series = relaxation.solve_corrected(family.alpha, family.B, m,
                                            args.T, args.h, scheme)
    else:
        problem = RelaxationProblem(alpha=family.alpha, B=family.B,
                                    forcing=family.forcing, y0=family.y0,
                                    T=args.T, h=args.h)
        series = (relaxation.solve_ml1(problem)
                  if scheme is Scheme.MODIFIED_L1
                  else relaxation.solve_l1(problem))
    exact = family.exact(series.x)
    _emit(_series_table(series.x, series.values, exact), args.out)
    return 0


def _cmd_subdiff(args) -> int:
    if args.problem is not None:
        family = problems.subdiffusion_family(args.problem, alpha=args.alpha)
        alpha = family.alpha
        exact = family.exact
    else:
        if args.alpha is None:
            raise ValueError("subdiff needs --alpha when no --problem is given")
        alpha = args.alpha

        def exact(x, t):
            decay = 1.0 if t == 0.0 else ml_relaxation_exact(alpha, 1.0, t)
            return np.sin(np.asarray(x, dtype=float)) * decay

    M = round(args.T / args.tau)
    if M < 1 or abs(M * args.tau - args.T) > 1e-9 * args.T:
        raise ValueError(f"tau = {args.tau} does not divide T = {args.T}")
    N = args.N if args.N is not None else 3 * M
    corrected, m = _resolve_correct(args.correct, alpha)
    scheme = _scheme(args)
    if corrected:
        sol = subdiffusion.solve_corrected(alpha, m, args.T, N, M, scheme)
    else:
        problem = SubdiffusionProblem(alpha=alpha, N=N, M=M, T=args.T,
                                      initial=SineMode(1))
        sol = (subdiffusion.solve_ml1(problem)
               if scheme is Scheme.MODIFIED_L1
               else subdiffusion.solve_l1(problem))
    exact_profile = exact(sol.x, args.T)
    _emit(_series_table(sol.x, sol.final, exact_profile), args.out)
    return 0


def _cmd_converge(args) -> int:
    scheme = _scheme(args)
    if args.problem in problems.RELAXATION_IDS:
        family = problems.relaxation_family(args.problem, alpha=args.alpha,
                                            B=args.B)
        corrected, m = _resolve_correct(args.correct, family.alpha)
        ladder = Ladder(args.h0, args.levels)
        report = run_relaxation_study(family, scheme, ladder,
                                      corrected=corrected, m=m)
    else:
        if args.B is not None:
            raise ValueError(f"problem {args.problem!r} does not take --B")
        family = problems.subdiffusion_family(args.problem, alpha=args.alpha)
        corrected, m = _resolve_correct(args.correct, family.alpha)
        ladder = Ladder(args.h0, args.levels, Coupling.SPACE_FROM_TIME)
        report = run_subdiffusion_study(family, scheme, ladder,
                                        corrected=corrected, m=m)
    _emit(render_report(report, args.format), args.out)
    return 0


def run(argv=None) -> int:
    """Parse argv and dispatch; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"fracsolve: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"fracsolve: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line interface for the generalized-derivative solvers.

Exit codes: 0 success, 2 parse/usage error, 3 single run did not converge,
4 file error. Values may start with '-', e.g. `--x0-range -2:13:31` or
`--coeffs -1,0,0,8`.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from gendrv.cubic_solver import Cubic, discriminant, depress, solve_cubic
from gendrv.data_exporter import DataExporter
from gendrv.derivator import Backend, analytic_coefficients, fd_coefficients
from gendrv.errors import ConfigError, ExportError, GendrvError
from gendrv.solvers import (
    EXTREMUM_METHODS, ROOT_METHODS, Direction, Method, SolverConfig, classify_point, solve,
)
from gendrv.sweep_runner import SweepSpec, compare_methods, run_sweep, stats_frame, summarize
from gendrv.target import resolve

logger = logging.getLogger("gendrv")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_IO = 4

# (baseline, candidate) pairs reported after a sweep when both are present
COMPARISONS = [(Method.LNR, Method.CNR), (Method.LG, Method.QG), (Method.LNR, Method.QNR)]

# options whose value may begin with '-' (negative numbers, ranges, expressions)
_VALUE_FLAGS = (
    "--function", "--x0", "--x", "--x0-range", "--coeffs", "--tol", "--delta", "--step-a",
)


def _print_json(data) -> None:
    print(json.dumps(data, indent=2))


def _config_from_args(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig.build(
        tol=args.tol,
        max_iter=args.max_iter,
        step_a=getattr(args, "step_a", None),
        backend=args.backend,
        delta=args.delta,
        direction=getattr(args, "direction", None),
    )


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--x0-range must be start:end:count, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--x0-range must be start:end:count, got {text!r}") from exc


def _parse_floats(text: str, count: int, flag: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects {count} comma-separated numbers, got {text!r}") from exc
    if len(values) != count:
        raise ConfigError(f"{flag} expects {count} comma-separated numbers, got {text!r}")
    return values


def _single_run(args: argparse.Namespace, classify: bool) -> int:
    f = resolve(args.function)
    cfg = _config_from_args(args)
    result = solve(args.method, f, args.x0, cfg)
    output = result.to_dict(include_trace=args.trace)
    if classify and result.converged:
        output["classification"] = classify_point(f, result.x_star).value
    _print_json(output)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_roots(args: argparse.Namespace) -> int:
    """Run one root finder from one initial guess"""
    return _single_run(args, classify=False)


def cmd_extrema(args: argparse.Namespace) -> int:
    """Run one extremum finder and classify the point it reaches"""
    return _single_run(args, classify=True)


def cmd_sweep(args: argparse.Namespace) -> int:
    """Sweep initial guesses, write CSV (and JSON), print the summary"""
    start, end, count = _parse_range(args.x0_range)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        methods = [Method(m) for m in methods]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    spec = SweepSpec.build(
        function=args.function,
        methods=methods,
        x0_start=start,
        x0_end=end,
        x0_count=count,
        config=_config_from_args(args),
    )
    records = run_sweep(spec, workers=args.workers)
    stats = summarize(records)

    exporter = DataExporter()
    exporter.emit_csv(records, stats, args.out_csv)
    if args.out_json:
        exporter.emit_json(records, stats, args.out_json, spec.echo())

    print(stats_frame(stats).to_string(index=False))
    for baseline, candidate in COMPARISONS:
        if baseline in spec.methods and candidate in spec.methods:
            comparison = compare_methods(stats, baseline, candidate)
            if comparison["mean_ratio"] is not None:
                print(f"{baseline.label} / {candidate.label} mean iterations: "
                      f"{comparison['mean_ratio']:.2f}x")
    return EXIT_OK


def cmd_coeffs(args: argparse.Namespace) -> int:
    """Print derivator coefficients at one point"""
    f = resolve(args.function)
    if args.delta is None:
        coeffs = analytic_coefficients(f, args.x, args.degree)
    else:
        coeffs = fd_coefficients(f, args.x, args.delta, args.degree)
    _print_json(coeffs.to_dict())
    return EXIT_OK


def cmd_cubic_solve(args: argparse.Namespace) -> int:
    """Print the real roots and discriminant case of a*x^3 + b*x^2 + c*x + d"""
    try:
        cubic = Cubic(*_parse_floats(args.coeffs, 4, "--coeffs"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    roots = solve_cubic(cubic)
    output = roots.to_dict()
    output["discriminant"] = discriminant(depress(cubic))
    _print_json(output)
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, trace: bool = True):
    parser.add_argument("--function", required=True,
                        help='Expression in x or builtin:<name>, e.g. "builtin:quartic-y"')
    parser.add_argument("--tol", type=float, default=None,
                        help="Stop when |x_n - x_(n-1)| <= tol (default: 1e-4)")
    parser.add_argument("--max-iter", type=int, default=None,
                        help="Maximum number of updates (default: 200)")
    parser.add_argument("--backend", choices=[b.value for b in Backend], default=None,
                        help="Derivative source (default: analytic)")
    parser.add_argument("--delta", type=float, default=None,
                        help="Finite-difference spacing for --backend fd")
    if trace:
        parser.add_argument("--trace", action="store_true", help="Include the iteration trace")


def _add_gradient(parser: argparse.ArgumentParser):
    parser.add_argument("--step-a", type=float, default=None, help="L-G step size (default: 0.05)")
    parser.add_argument("--direction", choices=[d.value for d in Direction], default=None,
                        help="L-G search direction (default: min)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gendrv",
        description="Generalized-derivative root and extremum finders",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    roots = subparsers.add_parser("roots", help="Find a root from one initial guess")
    _add_common(roots)
    roots.add_argument("--method", required=True, choices=[m.value for m in ROOT_METHODS])
    roots.add_argument("--x0", type=float, required=True)
    roots.set_defaults(handler=cmd_roots)

    extrema = subparsers.add_parser("extrema", help="Find an extremum from one initial guess")
    _add_common(extrema)
    _add_gradient(extrema)
    extrema.add_argument("--method", required=True, choices=[m.value for m in EXTREMUM_METHODS])
    extrema.add_argument("--x0", type=float, required=True)
    extrema.set_defaults(handler=cmd_extrema)

    sweep = subparsers.add_parser("sweep", help="Benchmark methods over a grid of initial guesses")
    _add_common(sweep, trace=False)
    _add_gradient(sweep)
    sweep.add_argument("--methods", required=True, help="Comma list, e.g. l-nr,c-nr")
    sweep.add_argument("--x0-range", required=True, help="start:end:count")
    sweep.add_argument("--out-csv", required=True)
    sweep.add_argument("--out-json", default=None)
    sweep.add_argument("--workers", type=int, default=1, help="Parallel solver runs (default: 1)")
    sweep.set_defaults(handler=cmd_sweep)

    coeffs = subparsers.add_parser("coeffs", help="Derivator coefficients at a point")
    coeffs.add_argument("--function", required=True)
    coeffs.add_argument("--x", type=float, required=True)
    coeffs.add_argument("--degree", type=int, choices=[1, 2, 3], required=True)
    coeffs.add_argument("--delta", type=float, default=None,
                        help="Finite spacing; omit for the analytic limit")
    coeffs.set_defaults(handler=cmd_coeffs)

    cubic = subparsers.add_parser("cubic-solve", help="Real roots of a cubic")
    cubic.add_argument("--coeffs", required=True, help="a,b,c,d")
    cubic.set_defaults(handler=cmd_cubic_solve)
    return parser


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Rewrite `--flag value` as `--flag=value` so argparse keeps values like -2:13:31"""
    out: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in _VALUE_FLAGS:
            value = next(tokens, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_values(sys.argv[1:] if argv is None else argv))
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except ExportError as exc:
        logger.error("%s", exc)
        return EXIT_IO
    except GendrvError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

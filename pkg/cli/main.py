"""Command-line entry point: ``mahlerpairs <command> [options]``.

Each command prints (or writes with ``--out``) one result document and exits with
0 on success, 1 for a valid input with a negative answer, 2 for input errors and
3 when a resource cap is hit.
"""

import argparse
from pathlib import Path
from typing import Sequence

from config.logging_config import get_logger, setup_logging
from config.settings import get_settings
from core.types import CaseKind

from .commands import run_command
from .io import dumps, write_text

logger = get_logger(__name__)


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="Write the result here instead of stdout")


def _add_orders(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--order", type=int, default=None, help="Starting series order")
    parser.add_argument("--max-order", type=int, default=None, help="Cap for order doubling")


def _parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="mahlerpairs",
        description="Exact algorithms for pairs of linear functional equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Check the consistency of a system file")
    check.add_argument("system", type=Path)
    check.add_argument("--reduced", action="store_true", help="Also verify the reduced form at 0")
    _add_output(check)

    build = sub.add_parser("build", help="Build the system of two scalar operators")
    build.add_argument("operators", type=Path, nargs=2)
    _add_output(build)

    gauge = sub.add_parser("gauge", help="Apply a gauge transformation to a system")
    gauge.add_argument("system", type=Path)
    gauge.add_argument("gauge", type=Path)
    _add_output(gauge)

    shift = sub.add_parser("shift", help="Replace the sigma-matrix by its iterate")
    shift.add_argument("system", type=Path)
    shift.add_argument("--count", type=int, default=1, help="Number of sigma steps")
    _add_output(shift)

    reduce = sub.add_parser("reduce", help="Gauge a Mahler system to constant matrices")
    reduce.add_argument("system", type=Path)
    _add_orders(reduce)
    _add_output(reduce)

    solve = sub.add_parser("solve-rational", help="Search a rational solution extending a seed")
    solve.add_argument("operators", type=Path, nargs="+")
    solve.add_argument("--seed", type=Path, required=True, help="Series file with the seed")
    solve.add_argument("--max-degree", type=int, default=None, help="Pade degree bound")
    solve.add_argument("--denominator-hint", action="store_true", help="Use the shift-case denominator bound")
    _add_orders(solve)
    _add_output(solve)

    gen = sub.add_parser("gen", help="Generate a consistent system with a planted solution")
    gen.add_argument("--case", type=CaseKind, required=True, choices=list(CaseKind))
    gen.add_argument("--q", default=None)
    gen.add_argument("--q1", default=None)
    gen.add_argument("--q2", default=None)
    gen.add_argument("--alpha", default=None)
    gen.add_argument("--irrational", action="store_true", help="Declare alpha irrational")
    gen.add_argument("--constants", nargs="*", default=None, help="Transcendental generator names")
    gen.add_argument("--n", type=int, default=2, help="Dimension")
    gen.add_argument("--seed", type=int, default=0, help="Random seed")
    gen.add_argument(
        "--gauge-shape",
        choices=["identity", "lower", "general"],
        default="lower",
        help="Shape of the random gauge; reduce accepts only identity or lower gauges",
    )
    gen.add_argument("--factors", type=int, default=3)
    gen.add_argument("--degree", type=int, default=2)
    gen.add_argument("--height", type=int, default=3)
    gen.add_argument("--monomial-diagonal", action="store_true")
    _add_output(gen)

    automaton = sub.add_parser("automaton", help="Mahler relation of an automatic set")
    automaton.add_argument("dfao", type=Path)
    _add_output(automaton)

    args = parser.parse_args(argv)
    if args.command == "solve-rational" and len(args.operators) > 2:
        parser.error("solve-rational takes one or two operator files")
    return args


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code."""
    args = _parse_args(argv)
    # gen is reproducible, so its runs are named by seed
    setup_logging(args.command, args.seed if args.command == "gen" else None)
    logger.info(f"Running {args.command} ({get_settings().environment})")

    code, envelope = run_command(args)
    write_text(args.out, dumps(envelope))
    logger.info(f"{args.command} finished with verdict {envelope.verdict} and exit code {int(code)}")
    return int(code)


if __name__ == "__main__":
    raise SystemExit(main())

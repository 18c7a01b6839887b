"""
Command Line Entry Point

    abeltrace trace-test <file>
    abeltrace interpolate <file> -o <out>
    abeltrace class-check <file>
    abeltrace residue-check <file>
    abeltrace mixed-volume <file>

Reports are written to standard output as JSON; logs go to standard error.
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from src import __version__
from src.cli.commands import (
    CommandResult,
    Overrides,
    cmd_class_check,
    cmd_interpolate,
    cmd_mixed_volume,
    cmd_residue_check,
    cmd_trace_test,
)
from src.utils.logger import setup_logging


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        type=str,
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level (default: from environment)",
    )

    tuning = argparse.ArgumentParser(add_help=False)
    tuning.add_argument("--tol", type=float, default=None, help="Fit residual tolerance")
    tuning.add_argument("--grid", type=int, default=None, help="Grid nodes per axis")
    tuning.add_argument("--seed", type=int, default=None, help="Random seed")
    tuning.add_argument("--steps", type=int, default=None, help="Continuation steps per path")

    parser = argparse.ArgumentParser(
        prog="abeltrace",
        description="Trace tests, interpolation and class certificates for germ families",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    trace_test = subparsers.add_parser(
        "trace-test", parents=[common, tuning], help="Affineness test of coordinate traces"
    )
    trace_test.add_argument("file", type=Path, help="Problem file")

    interpolate = subparsers.add_parser(
        "interpolate", parents=[common, tuning], help="Reconstruct the interpolating hypersurface"
    )
    interpolate.add_argument("file", type=Path, help="Problem file")
    interpolate.add_argument(
        "-o", "--output", type=Path, required=True, help="Where to write the polynomial file"
    )

    class_check = subparsers.add_parser(
        "class-check", parents=[common, tuning], help="Picard class certificate"
    )
    class_check.add_argument("file", type=Path, help="Problem file with a class_spec")

    residue_check = subparsers.add_parser(
        "residue-check", parents=[common], help="Global residue sum and vanishing prediction"
    )
    residue_check.add_argument("file", type=Path, help="Residue system file")

    mixed = subparsers.add_parser(
        "mixed-volume", parents=[common], help="Normalized mixed volume of polytopes"
    )
    mixed.add_argument("file", type=Path, help="Polytope list file")

    return parser


def dispatch(args: argparse.Namespace) -> CommandResult:
    if args.command == "residue-check":
        return cmd_residue_check(args.file)
    if args.command == "mixed-volume":
        return cmd_mixed_volume(args.file)

    overrides = Overrides(
        fit_tol=args.tol,
        grid_size=args.grid,
        seed=args.seed,
        continuation_steps=args.steps,
    )
    if args.command == "trace-test":
        return cmd_trace_test(args.file, overrides)
    if args.command == "interpolate":
        return cmd_interpolate(args.file, args.output, overrides)
    return cmd_class_check(args.file, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function for command-line usage."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging("abeltrace", log_level=args.log_level)

    result = dispatch(args)
    print(result.render())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: `compopt <command> ...`."""
import argparse
import sys
from typing import List, Optional

from compopt.commands import bounds, check, gradcheck, run
from compopt.config import DEFAULT_JOBS, LOG_LEVEL, configure_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compopt",
        description="Duality-free stochastic composition optimization experiments",
    )
    parser.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Worker processes across cells")
    parser.add_argument("--out", default=None, help="Override the config's output directory")
    parser.add_argument("--seed-override", type=int, default=None, help="Replace the problem seed")
    parser.add_argument("--verbose", action="store_true", help="Log at INFO level")

    subparsers = parser.add_subparsers(dest="command", required=True)
    # Register commands
    run.register(subparsers)
    check.register(subparsers)
    gradcheck.register(subparsers)
    bounds.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging("INFO" if args.verbose else LOG_LEVEL)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())

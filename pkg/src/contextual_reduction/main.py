"""Command-line application: parser setup and verb dispatch."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from .commands import emit, run, scale, verify
from .models.errors import ConfigInvalid, ReductionError, RunFailed

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contextual-reduction",
        description="Contextual linear bandits through linear bandit reductions: runs, scaling fits and checks.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  contextual-reduction run --algo epoch --T 4096 --seeds 5 --out results/
  contextual-reduction scale --suite random-finite --horizons 1024,2048,4096,8192 --seeds 5
  contextual-reduction verify --quick
  contextual-reduction emit results/traces.csv --format plotdata --out plots/
        """,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")

    # Verbs
    subparsers = parser.add_subparsers(dest="verb", required=True)
    run.register(subparsers)
    scale.register(subparsers)
    verify.register(subparsers)
    emit.register(subparsers)
    return parser


def dispatch(args: argparse.Namespace) -> int:
    """Run the selected verb and map failures to exit codes."""
    try:
        return args.handler(args)
    except ConfigInvalid as e:
        for error in e.errors:
            print(f"config error: {error.field}: {error.message}", file=sys.stderr)
        return EXIT_CONFIG
    except RunFailed as e:
        for failure in e.failures:
            print(f"seed {failure.seed} failed: [{failure.code}] {failure.message}", file=sys.stderr)
        return EXIT_RUNTIME
    except ReductionError as e:
        print(f"error: [{e.code}] {e.message}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def run_cli(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    root = logging.getLogger()
    if args.verbose and root.getEffectiveLevel() > logging.INFO:
        root.setLevel(logging.INFO)
    return dispatch(args)

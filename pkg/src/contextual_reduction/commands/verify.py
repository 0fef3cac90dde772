"""The `verify` verb: acceptance checks with a pass/fail exit code."""

from __future__ import annotations

import argparse

from ..models.errors import ConfigInvalid, FieldError
from ..services.config_loader import default_workers
from ..services.verification import CHECKS, run_verification
from .options import parse_int_list

EXIT_VERIFICATION_FAILED = 4


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="run the acceptance checks")
    parser.add_argument("--quick", action="store_true", help="small horizons and seed counts")
    parser.add_argument("--only", type=parse_int_list, help="comma-separated check numbers")
    parser.add_argument("--workers", type=int, help="worker processes for the statistical checks")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    only = args.only
    if only:
        unknown = [n for n in only if n not in CHECKS]
        if unknown:
            raise ConfigInvalid([FieldError("only", f"unknown check number(s) {unknown}; choose from {sorted(CHECKS)}")])

    results = run_verification(quick=args.quick, workers=args.workers or default_workers(), only=only)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"[{status}] {result.number:2d} {result.name:<26} {result.detail} ({result.elapsed_s:.1f}s)")

    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFICATION_FAILED if failed else 0

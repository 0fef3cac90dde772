"""Flags shared by the verbs that execute runs."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import Any

from ..models.run import Algorithm, RunConfig
from ..services.config_loader import load_run_config
from ..services.emitter import EmitFormat


def add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON run config; flags override its values")
    parser.add_argument("--suite", help="standard or preset suite name")
    parser.add_argument(
        "--algo",
        choices=[a.value for a in Algorithm],
        help="algorithm to run (default: epoch)",
    )
    parser.add_argument("--dim", type=int, help="ambient dimension d")
    parser.add_argument("--T", dest="horizon", type=int, help="horizon")
    parser.add_argument("--seeds", help="seed count n (0..n-1) or comma-separated list")
    parser.add_argument("--delta", type=float, help="confidence level")
    parser.add_argument(
        "--known-distribution",
        action="store_true",
        default=None,
        help="run pe-* variants on the exact g-table instead of the epoch reduction",
    )
    parser.add_argument("--workers", type=int, help="worker processes (default: $CONTEXTUAL_REDUCTION_WORKERS or 1)")


def add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help="directory for emitted files")
    parser.add_argument(
        "--format",
        dest="fmt",
        choices=[f.value for f in EmitFormat],
        default=EmitFormat.CSV.value,
        help="output format (default: csv)",
    )


def run_overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "suite": args.suite,
        "algorithm": args.algo,
        "dim": args.dim,
        "horizon": args.horizon,
        "seeds": args.seeds,
        "delta": args.delta,
        "workers": args.workers,
        "known_distribution": args.known_distribution,
    }


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return load_run_config(args.config, run_overrides(args))


def parse_int_list(value: str) -> list[int]:
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from e

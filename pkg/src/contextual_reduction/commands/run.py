"""The `run` verb: execute one configuration over its seeds."""

from __future__ import annotations

import argparse
import logging

from ..services.emitter import EmitFormat, emit
from ..services.runner import run
from .options import add_output_options, add_run_options, config_from_args

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("run", help="run one algorithm on one suite over several seeds")
    add_run_options(parser)
    add_output_options(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    traces = run(config)

    for trace in traces:
        print(
            f"{trace.algorithm}\tseed={trace.seed}\tT={trace.horizon}\t"
            f"regret={trace.final_regret:.4f}\treduced={trace.final_reduced_regret:.4f}"
        )

    if args.out is not None:
        for path in emit(traces, args.out, EmitFormat(args.fmt)):
            print(path)
    return 0

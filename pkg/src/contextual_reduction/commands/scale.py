"""The `scale` verb: regret against a grid of horizons and the log-log fit."""

from __future__ import annotations

import argparse
import dataclasses
import logging

from ..models.run import RegretTrace
from ..services.emitter import EmitFormat, emit
from ..services.runner import resolve_instance, run
from ..services.scaling import scaling_fit
from .options import add_output_options, add_run_options, config_from_args, parse_int_list

logger = logging.getLogger(__name__)

DEFAULT_HORIZONS = "1024,2048,4096,8192"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("scale", help="fit the regret scaling exponent over a horizon grid")
    add_run_options(parser)
    add_output_options(parser)
    parser.add_argument(
        "--horizons",
        type=parse_int_list,
        default=parse_int_list(DEFAULT_HORIZONS),
        help=f"comma-separated horizons (default: {DEFAULT_HORIZONS})",
    )
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    _, env, _ = resolve_instance(config)

    groups: dict[int, list[RegretTrace]] = {}
    for horizon in args.horizons:
        groups[horizon] = run(dataclasses.replace(config, horizon=horizon))
    report = scaling_fit(groups, env.dim)

    for row in report.rows:
        flag = "  EXCEEDS" if row.exceeds else ""
        print(f"T={row.horizon}\tmean={row.mean:.4f}\tstd={row.std:.4f}\tenvelope={row.envelope:.4f}{flag}")
    print(f"alpha={report.alpha:.4f}\tc={report.constant:.4f}\twithin_envelope={report.within_envelope}")

    if args.out is not None:
        traces = [trace for horizon in sorted(groups) for trace in groups[horizon]]
        for path in emit(traces, args.out, EmitFormat(args.fmt), report):
            print(path)
    return 0

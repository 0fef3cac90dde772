"""The `emit` verb: convert saved traces to another format, optionally with a fit."""

from __future__ import annotations

import argparse
from pathlib import Path

from ..models.run import RegretTrace
from ..services.emitter import EmitFormat, emit, load_traces
from ..services.scaling import scaling_fit
from .options import add_output_options


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("emit", help="re-emit traces written by run or scale")
    parser.add_argument("traces", type=Path, help="traces file (.csv or .jsonl)")
    add_output_options(parser)
    parser.add_argument(
        "--fit-dim",
        type=int,
        help="also fit the scaling exponent, grouping traces by horizon (d for the envelope)",
    )
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    traces = load_traces(args.traces)
    out = args.out if args.out is not None else args.traces.parent

    report = None
    if args.fit_dim is not None:
        groups: dict[int, list[RegretTrace]] = {}
        for trace in traces:
            groups.setdefault(trace.horizon, []).append(trace)
        report = scaling_fit(groups, args.fit_dim)
        print(f"alpha={report.alpha:.4f}\twithin_envelope={report.within_envelope}")

    for path in emit(traces, out, EmitFormat(args.fmt), report):
        print(path)
    return 0

"""Trace and report files: csv, json-lines and plot data."""

from __future__ import annotations

import csv
import io
import json
import logging
from collections.abc import Iterable, Sequence
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

from ..models.errors import IoFailure
from ..models.run import EpochRecord, RegretTrace, ScalingReport

logger = logging.getLogger(__name__)


class EmitFormat(Enum):
    CSV = "csv"
    JSON_LINES = "json-lines"
    PLOTDATA = "plotdata"


TRACE_COLUMNS = (
    "seed",
    "algorithm",
    "t",
    "proposal",
    "regret",
    "cum_regret",
    "reduced_regret",
    "cum_reduced_regret",
    "reward",
    "clean_mean",
    "optimal_value",
    "corruption",
    "epoch",
    "gamma",
    "eps_m",
    "eps_prime_m",
    "survivors",
    "policy_change",
    "context_id",
)
REPORT_COLUMNS = ("horizon", "mean", "std", "runs", "envelope", "exceeds", "residual")
PLOT_COLUMNS = ("x", "y", "series")

_FILE_NAMES = {
    EmitFormat.CSV: ("traces.csv", "scaling.csv"),
    EmitFormat.JSON_LINES: ("traces.jsonl", "scaling.jsonl"),
    EmitFormat.PLOTDATA: ("plotdata.csv", "scaling-plotdata.csv"),
}


def _num(value: float) -> str:
    return repr(float(value))


def trace_rows(trace: RegretTrace) -> Iterable[dict[str, Any]]:
    """One record per round, numbers kept exact."""
    epochs = {record.index: record for record in trace.epochs}
    changes = set(trace.policy_changes)
    cum_regret = trace.cum_regret
    cum_reduced = trace.cum_reduced_regret
    for i in range(trace.horizon):
        t = i + 1
        m = int(trace.epoch[i])
        record = epochs.get(m)
        yield {
            "seed": trace.seed,
            "algorithm": trace.algorithm,
            "t": t,
            "proposal": int(trace.proposals[i]),
            "regret": float(trace.regret[i]),
            "cum_regret": float(cum_regret[i]),
            "reduced_regret": float(trace.reduced_regret[i]),
            "cum_reduced_regret": float(cum_reduced[i]),
            "reward": float(trace.reward[i]),
            "clean_mean": float(trace.clean_mean[i]),
            "optimal_value": float(trace.optimal_value[i]),
            "corruption": float(trace.corruption[i]),
            "epoch": m,
            "gamma": record.gamma if record else float("nan"),
            "eps_m": record.epsilon if record else float("nan"),
            "eps_prime_m": record.epsilon_realized if record else float("nan"),
            "survivors": record.survivors if record else -1,
            "policy_change": int(t in changes),
            "context_id": int(trace.context_ids[i]),
        }


def _csv_text(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_num(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buffer.getvalue()


def _jsonl_text(rows: Iterable[dict[str, Any]]) -> str:
    return "".join(json.dumps(row) + "\n" for row in rows)


def _plot_rows(traces: Sequence[RegretTrace]) -> Iterable[dict[str, Any]]:
    for trace in traces:
        label = f"{trace.algorithm}/seed{trace.seed}"
        for t, value in enumerate(trace.cum_regret, start=1):
            yield {"x": t, "y": float(value), "series": f"cum_regret/{label}"}
        for record in trace.epochs:
            yield {"x": record.index, "y": record.epsilon, "series": f"eps_m/{label}"}
            yield {"x": record.index, "y": record.epsilon_realized, "series": f"eps_prime_m/{label}"}


def _report_rows(report: ScalingReport) -> list[dict[str, Any]]:
    return [
        {
            "horizon": row.horizon,
            "mean": row.mean,
            "std": row.std,
            "runs": row.runs,
            "envelope": row.envelope,
            "exceeds": int(row.exceeds),
            "residual": residual,
        }
        for row, residual in zip(report.rows, report.residuals)
    ]


def _report_summary(report: ScalingReport) -> dict[str, Any]:
    return {
        "alpha": report.alpha,
        "intercept": report.intercept,
        "constant": report.constant,
        "dim": report.dim,
        "within_envelope": report.within_envelope,
    }


def render_traces(traces: Sequence[RegretTrace], fmt: EmitFormat) -> str:
    if fmt == EmitFormat.CSV:
        return _csv_text(TRACE_COLUMNS, (row for trace in traces for row in trace_rows(trace)))
    if fmt == EmitFormat.JSON_LINES:
        return _jsonl_text(row for trace in traces for row in trace_rows(trace))
    return _csv_text(PLOT_COLUMNS, _plot_rows(traces))


def render_report(report: ScalingReport, fmt: EmitFormat) -> str:
    if fmt == EmitFormat.CSV:
        return _csv_text(REPORT_COLUMNS, _report_rows(report))
    if fmt == EmitFormat.JSON_LINES:
        return _jsonl_text([*_report_rows(report), _report_summary(report)])
    plot = []
    for row in report.rows:
        plot.append({"x": row.horizon, "y": row.mean, "series": "mean_regret"})
        plot.append({"x": row.horizon, "y": row.envelope, "series": "envelope"})
    return _csv_text(PLOT_COLUMNS, plot)


def _write(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {path}")
    return path


def emit(
    traces: Sequence[RegretTrace],
    out_dir: Path,
    fmt: EmitFormat,
    report: ScalingReport | None = None,
) -> list[Path]:
    """Write traces (and the report, when given) into `out_dir`."""
    trace_name, report_name = _FILE_NAMES[fmt]
    paths = [_write(out_dir / trace_name, render_traces(traces, fmt))]
    if report is not None:
        paths.append(_write(out_dir / report_name, render_report(report, fmt)))
    return paths


def _column(group: list[dict[str, Any]], name: str, cast: type = float) -> np.ndarray:
    return np.array([cast(r[name]) for r in group], dtype=cast)


def _traces_from_rows(rows: Iterable[dict[str, Any]]) -> list[RegretTrace]:
    grouped: dict[tuple[int, str], list[dict[str, Any]]] = {}
    for row in rows:
        grouped.setdefault((int(row["seed"]), str(row["algorithm"])), []).append(row)

    traces = []
    for (seed, algorithm), group in grouped.items():
        group.sort(key=lambda r: int(r["t"]))

        epoch = _column(group, "epoch", int)
        epochs = []
        for m in dict.fromkeys(int(x) for x in epoch):
            rounds = [r for r in group if int(r["epoch"]) == m]
            first = rounds[0]
            epochs.append(
                EpochRecord(
                    index=m,
                    start=int(first["t"]),
                    end=int(rounds[-1]["t"]),
                    epsilon=float(first["eps_m"]),
                    epsilon_realized=float(first["eps_prime_m"]),
                    gamma=float(first["gamma"]),
                    survivors=int(first["survivors"]),
                )
            )
        traces.append(
            RegretTrace(
                algorithm=algorithm,
                seed=seed,
                proposals=_column(group, "proposal", int),
                regret=_column(group, "regret"),
                reduced_regret=_column(group, "reduced_regret"),
                reward=_column(group, "reward"),
                clean_mean=_column(group, "clean_mean"),
                optimal_value=_column(group, "optimal_value"),
                corruption=_column(group, "corruption"),
                epoch=epoch,
                context_ids=_column(group, "context_id", int),
                epochs=[e for e in epochs if e.survivors >= 0],
                policy_changes=[int(r["t"]) for r in group if int(r["policy_change"])],
            )
        )
    return traces


def parse_traces_csv(text: str) -> list[RegretTrace]:
    return _traces_from_rows(csv.DictReader(io.StringIO(text)))


def parse_traces_jsonl(text: str) -> list[RegretTrace]:
    return _traces_from_rows(json.loads(line) for line in text.splitlines() if line.strip())


def load_traces(path: Path) -> list[RegretTrace]:
    """Read traces written by `emit` in csv or json-lines format."""
    try:
        text = path.read_text()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    if path.suffix == ".jsonl":
        return parse_traces_jsonl(text)
    return parse_traces_csv(text)

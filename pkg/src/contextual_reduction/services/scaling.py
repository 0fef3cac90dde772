"""Log-log fit of regret against the horizon."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence

import numpy as np

from ..models.errors import InsufficientGrid
from ..models.run import RegretTrace, ScalingReport, ScalingRow

logger = logging.getLogger(__name__)

MIN_HORIZONS = 4
MIN_RUNS = 3
ENVELOPE_TOLERANCE = 1e-9


def envelope_rate(dim: int, horizon: int) -> float:
    """d * sqrt(T log T)"""
    return dim * float(np.sqrt(horizon * np.log(horizon)))


def scaling_fit_values(groups: Mapping[int, Sequence[float]], dim: int) -> ScalingReport:
    """Fit log(mean final regret) = alpha * log(T) + intercept.

    The envelope constant c is calibrated on the smallest horizon and held
    fixed; a row exceeds when its mean regret is above c * d * sqrt(T log T).
    """
    horizons = sorted(groups)
    if len(horizons) < MIN_HORIZONS:
        raise InsufficientGrid(f"need at least {MIN_HORIZONS} horizons, got {len(horizons)}")
    short = [T for T in horizons if len(groups[T]) < MIN_RUNS]
    if short:
        raise InsufficientGrid(f"need at least {MIN_RUNS} runs per horizon; short: {short}")
    if horizons[0] < 2:
        raise InsufficientGrid("horizons must be at least 2")

    values = [np.asarray(groups[T], dtype=float) for T in horizons]
    means = np.array([v.mean() for v in values])
    if np.any(means <= 0):
        raise InsufficientGrid("mean regret must be positive at every horizon for a log-log fit")

    log_t = np.log(np.asarray(horizons, dtype=float))
    log_mean = np.log(means)
    alpha, intercept = np.polyfit(log_t, log_mean, 1)
    residuals = log_mean - (alpha * log_t + intercept)

    constant = means[0] / envelope_rate(dim, horizons[0])
    rows = []
    for T, v, mean in zip(horizons, values, means):
        envelope = constant * envelope_rate(dim, T)
        rows.append(
            ScalingRow(
                horizon=T,
                mean=float(mean),
                std=float(v.std(ddof=1)),
                runs=int(v.size),
                envelope=float(envelope),
                exceeds=bool(mean > envelope * (1 + ENVELOPE_TOLERANCE)),
            )
        )

    logger.info(f"Scaling fit over {len(horizons)} horizons: alpha={alpha:.4f}")
    return ScalingReport(
        rows=tuple(rows),
        alpha=float(alpha),
        intercept=float(intercept),
        residuals=tuple(float(r) for r in residuals),
        constant=float(constant),
        dim=dim,
    )


def scaling_fit(groups: Mapping[int, Sequence[RegretTrace]], dim: int) -> ScalingReport:
    """Scaling report from traces grouped by horizon."""
    return scaling_fit_values({T: [t.final_regret for t in traces] for T, traces in groups.items()}, dim)

"""Epoch and batch schedules, epoch misspecification levels and confidence widths."""

from __future__ import annotations

import math

import numpy as np

from ..models.errors import ScheduleMismatch
from ..models.reduction import ConfidenceSchedule, ConfidenceVariant, EpochSchedule


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if value <= 0:
            raise ValueError(f"{name} must be positive, got {value}")


def epoch_epsilon(m: int, t_m: int, n_epochs: int, net_size: int, delta: float) -> float:
    """eps_1 = 1, eps_m = 2 sqrt(ln(M |net| / delta) / t^(m)) for m >= 2."""
    if m == 1:
        return 1.0
    return 2.0 * math.sqrt(math.log(n_epochs * net_size / delta) / t_m)


def schedule_from_boundaries(boundaries: list[int] | np.ndarray, net_size: int, delta: float) -> EpochSchedule:
    """EpochSchedule for explicit boundaries [0, t^(2), ..., T]."""
    boundaries = np.asarray(boundaries, dtype=np.int64)
    n_epochs = int(boundaries.size - 1)
    epsilons = np.array(
        [epoch_epsilon(m, int(boundaries[m - 1]), n_epochs, net_size, delta) for m in range(1, n_epochs + 1)]
    )
    schedule = EpochSchedule(boundaries=boundaries, epsilons=epsilons)
    validate_schedule(schedule, int(boundaries[-1]))
    return schedule


def doubling_schedule(horizon: int, net_size: int, delta: float) -> EpochSchedule:
    """Boundaries 0, 1, 2, 4, ..., 2^k, T with 2^k < T."""
    _check_positive(horizon=horizon, net_size=net_size)
    boundaries = [0]
    power = 1
    while power < horizon:
        boundaries.append(power)
        power *= 2
    boundaries.append(horizon)
    return schedule_from_boundaries(boundaries, net_size, delta)


def batched_schedule(horizon: int, batches: int) -> EpochSchedule:
    """Paired batch lengths l_{2k-1} = l_{2k} = floor(u_k) - floor(u_{k-1}), u_k = T^(1 - 2^-k).

    The last boundary is T: the sequence is cut at the first boundary reaching
    T, or the last batch is extended when the lengths fall short.
    """
    _check_positive(horizon=horizon)
    if batches < 2 or batches % 2:
        raise ValueError(f"the number of batches must be even and at least 2, got {batches}")

    # pow can land just below an exact integer power
    floors = [0] + [math.floor(horizon ** (1.0 - 2.0**-k) + 1e-9) for k in range(1, batches // 2 + 1)]
    lengths: list[int] = []
    for k in range(1, batches // 2 + 1):
        length = floors[k] - floors[k - 1]
        lengths.extend([length, length])

    boundaries = [0]
    for length in lengths:
        nxt = boundaries[-1] + length
        if nxt >= horizon:
            boundaries.append(horizon)
            break
        if length > 0:
            boundaries.append(nxt)
    else:
        if len(boundaries) > 1:
            boundaries[-1] = horizon
        else:
            boundaries.append(horizon)

    schedule = EpochSchedule(
        boundaries=np.asarray(boundaries, dtype=np.int64), epsilons=np.ones(len(boundaries) - 1)
    )
    validate_schedule(schedule, horizon)
    return schedule


def validate_schedule(schedule: EpochSchedule, horizon: int) -> None:
    """Boundaries must partition rounds 1..T into nonempty epochs."""
    b = schedule.boundaries
    if b.size < 2 or b[0] != 0 or b[-1] != horizon:
        raise ScheduleMismatch(f"boundaries must run from 0 to {horizon}, got {b.tolist()}")
    if np.any(np.diff(b) <= 0):
        raise ScheduleMismatch(f"boundaries must be strictly increasing, got {b.tolist()}")
    if schedule.epsilons.size != schedule.n_epochs:
        raise ScheduleMismatch("one epsilon per epoch is required")


def _loglog(d: int) -> float:
    return max(1.0, math.log2(math.log2(max(d, 4))))


def confidence_gamma(
    conf: ConfidenceSchedule,
    m: int,
    t_m: float,
    T_m: float,
    d: int,
    net_size: int,
    delta: float,
    T: int,
) -> float:
    """Confidence width gamma_m of the selected variant, natural logarithms.

    For the batched variant `T_m` is the previous batch length T_{m-1}.
    """
    _check_positive(t_m=t_m, T_m=T_m, d=d, net_size=net_size, delta=delta, T=T)
    log_t = math.log(T)
    variant = conf.variant

    if variant == ConfidenceVariant.PLAIN:
        return 6.0 * math.sqrt(d * math.log(T * net_size / delta) / t_m)
    if variant == ConfidenceVariant.MISSPEC_UNKNOWN:
        return 6.0 * d * math.sqrt(log_t / T_m)
    if variant == ConfidenceVariant.MISSPEC_KNOWN:
        return 6.0 * d * math.sqrt(log_t / T_m) + conf.epsilon * math.sqrt(d)
    if variant == ConfidenceVariant.CORRUPTION:
        corruption = 2.0 * conf.budget * (4.0 * d * _loglog(d) + 18.0) / T_m * math.sqrt(8.0 * d)
        return 8.0 * d * math.sqrt(log_t / t_m) + corruption
    if variant == ConfidenceVariant.SPARSE:
        s = conf.sparsity or d
        return 6.0 * math.sqrt(2.0 * d * s * math.log(T / delta) / t_m)
    if variant == ConfidenceVariant.STRUCTURED:
        s = conf.sparsity or d
        return 6.0 * math.sqrt(d * s * math.log(T / delta) / t_m)
    if variant == ConfidenceVariant.BATCHED:
        batches = conf.batches or m
        return 10.0 * math.sqrt(d / T_m * math.log(batches * net_size / delta))
    raise ValueError(f"unsupported confidence variant {variant}")

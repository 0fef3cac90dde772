"""G-optimal experimental design, allocation and least squares."""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Iterable
from pathlib import Path

import numpy as np
from scipy.linalg import pinvh, qr

from ..models.errors import DegenerateActions, IoFailure
from ..models.geometry import DesignWeights, Estimate
from .nets import format_number, parse_header

logger = logging.getLogger(__name__)

PRUNE_THRESHOLD = 1e-6
RANK_TOLERANCE = 1e-10
LEVERAGE_TOLERANCE = 1e-9
MAX_ITERATIONS = 100_000


def support_cap(dim: int) -> int:
    """floor(4 d log log d) + 16 with log log d read as max(1, log2 log2 max(d, 4))."""
    loglog = max(1.0, math.log2(math.log2(max(dim, 4))))
    return int(math.floor(4 * dim * loglog)) + 16


def design_from_weights(
    actions: np.ndarray,
    weights: np.ndarray,
    indices: np.ndarray | None = None,
    iterations: int = 0,
) -> DesignWeights:
    """Assemble a DesignWeights from support actions and their weights."""
    actions = np.atleast_2d(np.asarray(actions, dtype=float))
    weights = np.asarray(weights, dtype=float)
    weights = weights / weights.sum()
    gram = actions.T @ (weights[:, None] * actions)
    return DesignWeights(
        support=actions,
        weights=weights,
        gram=gram,
        gram_pinv=pinvh(gram),
        support_indices=np.arange(len(actions)) if indices is None else np.asarray(indices),
        iterations=iterations,
    )


def _span_coordinates(actions: np.ndarray) -> np.ndarray:
    """Coordinates of the actions in an orthonormal basis of their span."""
    _, singular, vt = np.linalg.svd(actions, full_matrices=False)
    rank = int(np.sum(singular > RANK_TOLERANCE * singular[0]))
    return actions @ vt[:rank].T


def _leverages(coords: np.ndarray, weights: np.ndarray) -> np.ndarray:
    gram = coords.T @ (weights[:, None] * coords)
    return np.einsum("ij,jk,ik->i", coords, pinvh(gram), coords)


def g_optimal_design(
    actions: np.ndarray,
    cap: int | None = None,
    leverage_target: float | None = None,
) -> DesignWeights:
    """Design whose leverage a^T G(rho)^+ a stays below `leverage_target` on every action.

    Frank-Wolfe on log det G(rho), started from the uniform design on a
    pivoted-QR basis of the actions, stopped as soon as the target holds.
    Defaults: target 2d, support cap `support_cap(d)`.
    """
    actions = np.atleast_2d(np.asarray(actions, dtype=float))
    if actions.shape[0] == 0:
        raise ValueError("g_optimal_design needs at least one action")
    if not np.any(actions):
        raise DegenerateActions("every action is the zero vector")

    dim = actions.shape[1]
    cap = support_cap(dim) if cap is None else cap
    target = 2.0 * dim if leverage_target is None else leverage_target

    coords = _span_coordinates(actions)
    rank = coords.shape[1]
    if target < rank - LEVERAGE_TOLERANCE:
        raise ValueError(f"leverage target {target} is below the action rank {rank}")

    _, _, pivots = qr(coords.T, pivoting=True, mode="economic")
    weights = np.zeros(len(actions))
    weights[pivots[:rank]] = 1.0 / rank

    iterations = 0
    leverages = _leverages(coords, weights)
    while iterations < MAX_ITERATIONS:
        k = int(np.argmax(leverages))
        top = leverages[k]
        if top <= target + LEVERAGE_TOLERANCE:
            break
        # exact line search for log det along e_k
        step = (top / rank - 1.0) / (top - 1.0)
        weights *= 1.0 - step
        weights[k] += step
        leverages = _leverages(coords, weights)
        iterations += 1
    else:
        logger.warning(
            f"Design solver stopped after {iterations} iterations at leverage {leverages.max():.6g}"
        )

    weights = _prune(coords, weights, target, cap)
    support = np.flatnonzero(weights)
    logger.debug(
        f"Design: {len(actions)} actions, rank {rank}, support {support.size}, "
        f"{iterations} iterations"
    )
    return design_from_weights(actions[support], weights[support], support, iterations)


def _prune(coords: np.ndarray, weights: np.ndarray, target: float, cap: int) -> np.ndarray:
    """Drop tiny weights, then the smallest ones while the support exceeds `cap`."""

    def feasible(candidate: np.ndarray) -> bool:
        return bool(_leverages(coords, candidate).max() <= target + LEVERAGE_TOLERANCE)

    pruned = np.where(weights < PRUNE_THRESHOLD, 0.0, weights)
    pruned /= pruned.sum()
    if feasible(pruned):
        weights = pruned

    while np.count_nonzero(weights) > cap:
        candidate = weights.copy()
        nonzero = np.flatnonzero(candidate)
        candidate[nonzero[np.argmin(candidate[nonzero])]] = 0.0
        candidate /= candidate.sum()
        if not feasible(candidate):
            logger.warning(
                f"Design support {np.count_nonzero(weights)} exceeds cap {cap}; "
                "trimming further would break the leverage target"
            )
            break
        weights = candidate
    return weights


def allocate(design: DesignWeights, batch_length: int) -> DesignWeights:
    """Round the design to integer pulls u(x) = ceil(rho(x) * batch_length)."""
    if batch_length < 1:
        raise ValueError("batch_length must be positive")
    allocations = np.ceil(design.weights * batch_length - 1e-9).astype(np.int64)
    return dataclasses.replace(design, allocations=allocations, batch_length=batch_length)


def allocate_to_length(design: DesignWeights, batch_length: int) -> DesignWeights:
    """Integer pulls summing to exactly `batch_length`, at least one per support point.

    One pull goes to every support point; the remaining batch_length - k are
    split by largest remainder of rho(x) * (batch_length - k).
    """
    k = len(design.weights)
    if batch_length < k:
        raise ValueError(f"batch_length {batch_length} is shorter than the design support ({k})")
    spare = batch_length - k
    raw = design.weights * spare
    allocations = np.floor(raw + 1e-9).astype(np.int64)
    short = spare - int(allocations.sum())
    if short > 0:
        order = np.argsort(allocations - raw, kind="stable")
        allocations[order[:short]] += 1
    allocations += 1
    return dataclasses.replace(design, allocations=allocations, batch_length=batch_length)


def leverage(action: np.ndarray, design: DesignWeights) -> float:
    return float(design.leverages(action)[0])


def fit_least_squares(actions: np.ndarray, rewards: np.ndarray) -> Estimate:
    """Minimum-norm least squares over the span of the actions."""
    actions = np.atleast_2d(np.asarray(actions, dtype=float))
    rewards = np.asarray(rewards, dtype=float)
    if actions.shape[0] == 0 or actions.shape[0] != rewards.size:
        raise ValueError("need one reward per action and at least one pair")
    theta_hat, *_ = np.linalg.lstsq(actions, rewards, rcond=None)
    return Estimate(
        theta_hat=theta_hat,
        gram_inverse=pinvh(actions.T @ actions),
        sample_count=int(rewards.size),
        residuals=rewards - actions @ theta_hat,
    )


def least_squares(pairs: Iterable[tuple[np.ndarray, float]]) -> Estimate:
    pairs = list(pairs)
    if not pairs:
        raise ValueError("least_squares needs at least one pair")
    actions = np.array([np.asarray(a, dtype=float) for a, _ in pairs])
    rewards = np.array([float(r) for _, r in pairs])
    return fit_least_squares(actions, rewards)


def least_squares_from_sums(
    support: np.ndarray, counts: np.ndarray, reward_sums: np.ndarray
) -> Estimate:
    """Least squares from per-action pull counts and reward sums.

    Same estimate as `fit_least_squares` on the expanded pairs: with
    G = sum u(x) x x^T and b = sum x * (rewards of x), theta = G^+ b.
    """
    support = np.atleast_2d(np.asarray(support, dtype=float))
    counts = np.asarray(counts, dtype=float)
    gram = support.T @ (counts[:, None] * support)
    gram_inverse = pinvh(gram)
    theta_hat = gram_inverse @ (support.T @ np.asarray(reward_sums, dtype=float))
    return Estimate(theta_hat=theta_hat, gram_inverse=gram_inverse, sample_count=int(counts.sum()))


def format_design(design: DesignWeights) -> str:
    lines = [f"dim={design.dim} kind=design radius={format_number(design.max_leverage())}"]
    for action, weight in zip(design.support, design.weights):
        lines.append(" ".join([*(format_number(x) for x in action), format_number(weight)]))
    return "\n".join(lines) + "\n"


def parse_design(text: str) -> DesignWeights:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty design file")
    dim = int(parse_header(lines[0])["dim"])
    rows = np.array([[float(x) for x in line.split()] for line in lines[1:]], dtype=float)
    if rows.ndim != 2 or rows.shape[1] != dim + 1:
        raise ValueError(f"design rows must have {dim} coordinates and a weight")
    return design_from_weights(rows[:, :dim], rows[:, dim])


def save_design(design: DesignWeights, path: Path) -> None:
    try:
        path.write_text(format_design(design))
    except OSError as e:
        raise IoFailure(f"cannot write design to {path}: {e}") from e


def load_design(path: Path) -> DesignWeights:
    try:
        return parse_design(path.read_text())
    except OSError as e:
        raise IoFailure(f"cannot read design file {path}: {e}") from e

"""Context sampling and per-round optimal values."""

from __future__ import annotations

import numpy as np

from ..models.environment import Context, ContextDistribution, ProductActionSet


def sample_context_indexed(dist: ContextDistribution, rng: np.random.Generator) -> tuple[Context, int]:
    """Draw A_t ~ D. The index is the support index for finite distributions, -1 for products."""
    if dist.is_finite:
        index = int(rng.choice(len(dist.supports), p=dist.probabilities))
        return dist.supports[index], index

    sets = []
    for coordinate in dist.coordinates:
        choice = int(rng.choice(len(coordinate.value_sets), p=coordinate.probabilities))
        sets.append(coordinate.value_sets[choice])
    return ProductActionSet(tuple(sets)), -1


def sample_context(dist: ContextDistribution, rng: np.random.Generator) -> Context:
    return sample_context_indexed(dist, rng)[0]


def optimal_round_value(context: Context, theta_star: np.ndarray) -> float:
    """max over the context of <a, theta*>, coordinatewise for product contexts."""
    return context.max_value(np.asarray(theta_star, dtype=float))

"""Martingale terms of the known-distribution regret decomposition."""

from __future__ import annotations

import numpy as np

from ..models.environment import ContextDistribution, EnvironmentSpec
from ..models.errors import RequiresFiniteSupport
from ..models.geometry import ParameterNet
from ..models.reduction import MartingaleDiagnostic
from ..models.run import RegretTrace
from .oracles import exact_g_many

INCREMENT_BOUND = 2.0


def martingale_diagnostics(
    trace: RegretTrace,
    dist: ContextDistribution,
    net: ParameterNet,
    env: EnvironmentSpec,
    delta: float = 0.05,
) -> MartingaleDiagnostic:
    """Running sums Sigma_T, Sigma'_T and the reduced-instance noise eta'_t.

    With v(theta) = <g(theta), theta*> from the exact oracle:
      Sigma increments   v(theta_t) - <a_t, theta*>
      Sigma' increments  v(theta*) - max_{a in A_t} <a, theta*>
      eta'_t             r_t - v(theta_t)
    so that regret - reduced regret = Sigma - Sigma' round by round.
    """
    if not dist.is_finite:
        raise RequiresFiniteSupport("martingale diagnostics need a finite-support distribution")
    if not 0 < delta < 1:
        raise ValueError("delta must be in (0, 1)")

    theta = env.theta_star
    values = exact_g_many(dist, net.points) @ theta
    best = float(exact_g_many(dist, theta[None, :])[0] @ theta)
    chosen = values[trace.proposals]

    return MartingaleDiagnostic(
        sigma=np.cumsum(chosen - trace.clean_mean),
        sigma_prime=np.cumsum(best - trace.optimal_value),
        eta_prime=trace.reward - chosen,
        increment_bound=INCREMENT_BOUND,
        delta=delta,
    )


def epoch_noise_means(diagnostic: MartingaleDiagnostic, trace: RegretTrace) -> dict[int, float]:
    """Mean of eta'_t over the rounds of each epoch."""
    return {
        int(m): float(diagnostic.eta_prime[trace.epoch == m].mean()) for m in np.unique(trace.epoch)
    }

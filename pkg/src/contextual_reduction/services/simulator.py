"""Reward simulation: noise, misspecification and budgeted corruption."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..models.environment import (
    AdversarySpec,
    AdversaryStrategy,
    Context,
    EnvironmentSpec,
    NoiseKind,
    RoundOutcome,
)
from ..models.errors import ActionNotInContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunStreams:
    """Independent random streams of one seeded run.

    Spawned from a single seed so that switching algorithms leaves the
    context and noise draws untouched.
    """

    contexts: np.random.Generator
    noise: np.random.Generator
    algorithm: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> RunStreams:
        children = np.random.SeedSequence(seed).spawn(3)
        return cls(*(np.random.default_rng(child) for child in children))


@dataclass(frozen=True, eq=False)
class Corruption:
    """c_t: `amount` on `action` (exact match), zero elsewhere."""

    action: np.ndarray | None = None
    amount: float = 0.0

    @property
    def magnitude(self) -> float:
        """sup_a |c_t(a)|"""
        return abs(self.amount) if self.action is not None else 0.0

    def value(self, action: np.ndarray) -> float:
        if self.action is None or not np.array_equal(self.action, action):
            return 0.0
        return self.amount


NO_CORRUPTION = Corruption()


@dataclass
class CorruptionAdversary:
    """Budgeted adversary deciding c_t from the history and the current context.

    The learner's current action is never consulted. `ledger` records
    sup_a |c_t(a)| per round and its running total never exceeds the budget.
    """

    spec: AdversarySpec
    theta_star: np.ndarray
    spent: float = 0.0
    ledger: list[float] = field(default_factory=list)

    @property
    def budget(self) -> float:
        return self.spec.budget

    @property
    def remaining(self) -> float:
        return max(self.spec.budget - self.spent, 0.0)

    def decide(self, context: Context, history: Sequence[RoundOutcome] = ()) -> Corruption:
        corruption = self._propose(context)
        if corruption.action is not None:
            allowed = min(abs(corruption.amount), self.remaining)
            corruption = Corruption(corruption.action, float(np.copysign(allowed, corruption.amount)))
            if allowed == 0.0:
                corruption = NO_CORRUPTION
        self.spent += corruption.magnitude
        self.ledger.append(corruption.magnitude)
        return corruption

    def _propose(self, context: Context) -> Corruption:
        if self.remaining <= 0.0:
            return NO_CORRUPTION
        if self.spec.strategy == AdversaryStrategy.FLIP_OPTIMAL:
            # negate the optimal arm's mean
            best = context.argmax(self.theta_star)
            return Corruption(best, -2.0 * float(best @ self.theta_star))
        target = self.spec.target
        if target is not None and context.contains(target):
            return Corruption(np.asarray(target, dtype=float), -self.spec.bias)
        return NO_CORRUPTION


def draw_noise(kind: NoiseKind, rng: np.random.Generator) -> float:
    """One draw of 1-sub-Gaussian reward noise."""
    if kind == NoiseKind.GAUSSIAN:
        return float(rng.standard_normal())
    if kind == NoiseKind.BOUNDED_UNIFORM:
        return float(rng.uniform(-1.0, 1.0))
    if kind == NoiseKind.RADEMACHER:
        return 1.0 if rng.random() < 0.5 else -1.0
    return 0.0


def play(
    env: EnvironmentSpec,
    context: Context,
    action: np.ndarray,
    rng: np.random.Generator,
    adversary: CorruptionAdversary | None = None,
    history: Sequence[RoundOutcome] = (),
) -> RoundOutcome:
    """Pull `action` in `context` and return the decomposed reward."""
    action = np.asarray(action, dtype=float)
    if not context.contains(action):
        raise ActionNotInContext(f"action {action.tolist()} is not in the current context")

    corruption = adversary.decide(context, history) if adversary is not None else NO_CORRUPTION

    theta = env.theta_star
    clean_mean = float(action @ theta)
    noise = draw_noise(env.noise, rng)
    misspecification = env.misspec.value(action) if env.misspec is not None else 0.0
    corruption_applied = corruption.value(action)
    optimal_value = context.max_value(theta)
    return RoundOutcome(
        context=context,
        pulled=action,
        clean_mean=clean_mean,
        noise=noise,
        misspecification=misspecification,
        corruption_applied=corruption_applied,
        observed_reward=clean_mean + noise + misspecification + corruption_applied,
        optimal_value=optimal_value,
        instantaneous_regret=optimal_value - clean_mean,
    )

"""Contextual linear bandit instance definitions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .geometry import NORM_TOLERANCE

PROBABILITY_TOLERANCE = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ActionSet:
    """A finite context: the arms admissible in one round."""

    actions: np.ndarray  # (k, d)

    def __post_init__(self) -> None:
        actions = np.array(self.actions, dtype=float, ndmin=2)
        if actions.shape[0] == 0:
            raise ValueError("an action set needs at least one action")
        if np.any(np.linalg.norm(actions, axis=1) > 1 + NORM_TOLERANCE):
            raise ValueError("action outside the unit ball")
        object.__setattr__(self, "actions", _frozen(actions))

    @property
    def dim(self) -> int:
        return int(self.actions.shape[1])

    def __len__(self) -> int:
        return int(self.actions.shape[0])

    def argmax_index(self, theta: np.ndarray) -> int:
        # np.argmax keeps the lowest index on ties
        return int(np.argmax(self.actions @ theta))

    def argmax(self, theta: np.ndarray) -> np.ndarray:
        return self.actions[self.argmax_index(theta)]

    def argmax_many(self, thetas: np.ndarray) -> np.ndarray:
        """Greedy action for every row of `thetas`, shape (n, d)."""
        return self.actions[np.argmax(self.actions @ thetas.T, axis=0)]

    def max_value(self, theta: np.ndarray) -> float:
        return float(np.max(self.actions @ theta))

    def contains(self, action: np.ndarray) -> bool:
        return bool(np.any(np.all(self.actions == action, axis=1)))


@dataclass(frozen=True, eq=False)
class ProductActionSet:
    """A product context prod_i A^(i), kept as its coordinate sets."""

    coordinate_sets: tuple[np.ndarray, ...]
    maxes: np.ndarray = field(init=False)
    mins: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        sets = tuple(_frozen(np.array(s, dtype=float, ndmin=1)) for s in self.coordinate_sets)
        if not sets or any(s.size == 0 for s in sets):
            raise ValueError("every coordinate set must be nonempty")
        object.__setattr__(self, "coordinate_sets", sets)
        object.__setattr__(self, "maxes", _frozen(np.array([s.max() for s in sets])))
        object.__setattr__(self, "mins", _frozen(np.array([s.min() for s in sets])))

    @property
    def dim(self) -> int:
        return len(self.coordinate_sets)

    def argmax(self, theta: np.ndarray) -> np.ndarray:
        # theta_i == 0 takes the max endpoint
        return np.where(np.asarray(theta) >= 0, self.maxes, self.mins)

    def argmax_many(self, thetas: np.ndarray) -> np.ndarray:
        return np.where(thetas >= 0, self.maxes, self.mins)

    def max_value(self, theta: np.ndarray) -> float:
        return float(self.argmax(theta) @ theta)

    def contains(self, action: np.ndarray) -> bool:
        action = np.asarray(action, dtype=float)
        if action.shape != (self.dim,):
            return False
        return all(bool(np.any(s == a)) for s, a in zip(self.coordinate_sets, action))


Context = ActionSet | ProductActionSet


class ContextKind(Enum):
    FINITE = "finite-support"
    PRODUCT = "product"


@dataclass(frozen=True, eq=False)
class CoordinateDistribution:
    """Distribution of one coordinate set A^(i) of a product context."""

    value_sets: tuple[np.ndarray, ...]
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        sets = tuple(_frozen(np.array(s, dtype=float, ndmin=1)) for s in self.value_sets)
        probs = np.asarray(self.probabilities, dtype=float)
        if len(sets) != probs.size or probs.size == 0:
            raise ValueError("value_sets and probabilities must have equal nonzero length")
        _check_probabilities(probs)
        object.__setattr__(self, "value_sets", sets)
        object.__setattr__(self, "probabilities", _frozen(probs))

    @property
    def expected_max(self) -> float:
        return float(sum(p * s.max() for p, s in zip(self.probabilities, self.value_sets)))

    @property
    def expected_min(self) -> float:
        return float(sum(p * s.min() for p, s in zip(self.probabilities, self.value_sets)))

    @property
    def magnitude(self) -> float:
        return float(max(np.abs(s).max() for s in self.value_sets))


@dataclass(frozen=True, eq=False)
class ContextDistribution:
    """The context distribution D, finite-support or product-structured."""

    kind: ContextKind
    supports: tuple[ActionSet, ...] = ()
    probabilities: np.ndarray = field(default_factory=lambda: np.zeros(0))
    coordinates: tuple[CoordinateDistribution, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == ContextKind.FINITE:
            probs = np.asarray(self.probabilities, dtype=float)
            if not self.supports or len(self.supports) != probs.size:
                raise ValueError("supports and probabilities must have equal nonzero length")
            if len({s.dim for s in self.supports}) != 1:
                raise ValueError("all supports must share one dimension")
            _check_probabilities(probs)
            object.__setattr__(self, "probabilities", _frozen(probs))
        else:
            if not self.coordinates:
                raise ValueError("a product distribution needs coordinate distributions")
            radius = np.sqrt(sum(c.magnitude**2 for c in self.coordinates))
            if radius > 1 + NORM_TOLERANCE:
                raise ValueError(f"product actions can leave the unit ball (norm {radius:.6g})")

    @classmethod
    def finite(
        cls, supports: list[ActionSet] | tuple[ActionSet, ...], probabilities: np.ndarray | list[float]
    ) -> ContextDistribution:
        return cls(ContextKind.FINITE, tuple(supports), np.asarray(probabilities, dtype=float))

    @classmethod
    def product(cls, coordinates: list[CoordinateDistribution]) -> ContextDistribution:
        return cls(ContextKind.PRODUCT, coordinates=tuple(coordinates))

    @property
    def dim(self) -> int:
        if self.kind == ContextKind.FINITE:
            return self.supports[0].dim
        return len(self.coordinates)

    @property
    def is_finite(self) -> bool:
        return self.kind == ContextKind.FINITE

    def all_actions(self) -> np.ndarray:
        """Stacked actions of every support set (finite-support only)."""
        return np.vstack([s.actions for s in self.supports])


def _check_probabilities(probs: np.ndarray) -> None:
    if np.any(probs < 0):
        raise ValueError("probabilities must be nonnegative")
    if abs(probs.sum() - 1.0) > PROBABILITY_TOLERANCE * max(1, probs.size):
        raise ValueError(f"probabilities sum to {probs.sum():.15g}, expected 1")


class NoiseKind(Enum):
    """Reward noise models, all 1-sub-Gaussian."""

    GAUSSIAN = "gaussian"
    BOUNDED_UNIFORM = "bounded-uniform"
    RADEMACHER = "rademacher"
    NONE = "none"


@dataclass(frozen=True, eq=False)
class Misspecification:
    """Perturbation f with sup |f| <= epsilon.

    Finite-support instances use an explicit per-action table; product
    instances use eps * tanh(sqrt(d) <w, a>).
    """

    epsilon: float
    table: dict[tuple[float, ...], float] = field(default_factory=dict)
    direction: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        worst = max((abs(v) for v in self.table.values()), default=0.0)
        if worst > self.epsilon + 1e-15:
            raise ValueError(f"misspecification table exceeds epsilon ({worst:.6g} > {self.epsilon})")

    def value(self, action: np.ndarray) -> float:
        if self.direction is not None:
            scale = np.sqrt(self.direction.size)
            return float(self.epsilon * np.tanh(scale * (self.direction @ action)))
        return self.table.get(tuple(float(x) for x in action), 0.0)


class AdversaryStrategy(Enum):
    FLIP_OPTIMAL = "flip-optimal"
    CONSTANT_BIAS = "constant-bias-on-target"


@dataclass(frozen=True, eq=False)
class AdversarySpec:
    """Configuration of a corruption adversary. Runtime state lives in the simulator."""

    strategy: AdversaryStrategy
    budget: float
    bias: float = 1.0  # constant-bias only
    target: np.ndarray | None = None  # constant-bias only

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ValueError("corruption budget must be nonnegative")
        if self.strategy == AdversaryStrategy.CONSTANT_BIAS and self.target is None:
            raise ValueError("constant-bias adversary needs a target action")


@dataclass(frozen=True, eq=False)
class EnvironmentSpec:
    """Ground truth of a contextual linear bandit instance."""

    theta_star: np.ndarray
    noise: NoiseKind = NoiseKind.GAUSSIAN
    misspec: Misspecification | None = None
    adversary: AdversarySpec | None = None
    sparsity: int | None = None

    def __post_init__(self) -> None:
        theta = np.array(self.theta_star, dtype=float, ndmin=1)
        if np.linalg.norm(theta) > 1 + NORM_TOLERANCE:
            raise ValueError("theta_star must lie in the unit ball")
        if self.sparsity is not None and np.count_nonzero(theta) > self.sparsity:
            raise ValueError(f"theta_star has more than {self.sparsity} nonzero coordinates")
        object.__setattr__(self, "theta_star", _frozen(theta))

    @property
    def dim(self) -> int:
        return int(self.theta_star.size)


@dataclass(frozen=True, eq=False)
class RoundOutcome:
    """Everything that happened in one round."""

    context: Context
    pulled: np.ndarray
    clean_mean: float
    noise: float
    misspecification: float
    corruption_applied: float
    observed_reward: float
    optimal_value: float
    instantaneous_regret: float

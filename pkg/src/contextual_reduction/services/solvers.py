"""Linear-bandit solvers driven through a propose/observe round protocol."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from typing import Protocol

import numpy as np

from ..models.errors import EmptySurvivorSet
from ..models.reduction import ConfidenceSchedule, PhaseRecord
from .design import allocate, g_optimal_design, least_squares_from_sums
from .schedules import confidence_gamma

logger = logging.getLogger(__name__)


class Solver(Protocol):
    """A linear bandit over a fixed arm list; arms are addressed by index."""

    def propose(self) -> int: ...

    def observe(self, index: int, reward: float) -> None: ...

    @property
    def survivors(self) -> np.ndarray: ...


SolverFactory = Callable[[np.ndarray, float | None], Solver]


class PhasedElimination:
    """Phased elimination with G-optimal exploration.

    Phase l plays the design over the surviving arms' distinct vectors with
    ceil(rho(x) * D * 4^l) pulls each, fits least squares and drops every arm
    whose estimated gap to the best survivor exceeds the phase width.
    `known_eps` widens every test by known_eps * sqrt(D).
    """

    def __init__(
        self,
        arms: np.ndarray,
        horizon: int,
        conf: ConfidenceSchedule,
        delta: float,
        known_eps: float | None = None,
        net_size: int | None = None,
    ) -> None:
        self.arms = np.atleast_2d(np.asarray(arms, dtype=float))
        if self.arms.shape[0] == 0:
            raise ValueError("PhasedElimination needs at least one arm")
        self.horizon = horizon
        self.conf = conf
        self.delta = delta
        self.known_eps = known_eps
        self.net_size = net_size or len(self.arms)
        self.dim = self.arms.shape[1]

        self._survivors = np.arange(len(self.arms))
        self.phases: list[PhaseRecord] = []
        self.phase = 0
        self._start_phase()

    @property
    def survivors(self) -> np.ndarray:
        return self._survivors.copy()

    @property
    def last_width(self) -> float:
        return self.phases[-1].width if self.phases else math.inf

    def _start_phase(self) -> None:
        self.phase += 1
        budget = self.dim * 4**self.phase
        vectors = self.arms[self._survivors]
        _, first = np.unique(vectors, axis=0, return_index=True)
        representatives = self._survivors[np.sort(first)]

        if not np.any(self.arms[representatives]):
            # zero vectors carry no information: cycle the survivors
            self._support = self._survivors.copy()
            self._informative = False
            queue = np.resize(self._support, max(budget, self._support.size))
        else:
            design = allocate(g_optimal_design(self.arms[representatives]), budget)
            self._support = representatives[design.support_indices]
            self._informative = True
            queue = np.repeat(self._support, design.allocations)

        self._queue = queue
        self._position = 0
        self._observed = 0
        self._slot = {int(arm): i for i, arm in enumerate(self._support)}
        self._counts = np.zeros(self._support.size)
        self._sums = np.zeros(self._support.size)

    def propose(self) -> int:
        if self._position >= self._queue.size:
            # waiting on feedback; replay the phase's last arm
            return int(self._queue[-1])
        arm = int(self._queue[self._position])
        self._position += 1
        return arm

    def observe(self, index: int, reward: float) -> None:
        slot = self._slot.get(int(index))
        if slot is not None:
            self._counts[slot] += 1
            self._sums[slot] += reward
        self._observed += 1
        if self._observed >= self._queue.size:
            self._end_phase()
            self._start_phase()

    def _end_phase(self) -> None:
        before = int(self._survivors.size)
        samples = int(self._observed)
        if not self._informative:
            self.phases.append(PhaseRecord(self.phase, samples, math.inf, before, before))
            return

        estimate = least_squares_from_sums(self.arms[self._support], self._counts, self._sums)
        width = confidence_gamma(
            self.conf, self.phase, samples, samples, self.dim, self.net_size, self.delta, self.horizon
        )
        if self.known_eps:
            width += self.known_eps * math.sqrt(self.dim)

        values = self.arms[self._survivors] @ estimate.theta_hat
        keep = values.max() - values <= width
        if not np.any(keep):
            raise EmptySurvivorSet("elimination removed every arm")
        self._survivors = self._survivors[keep]
        self.phases.append(
            PhaseRecord(self.phase, samples, width, before, int(self._survivors.size), estimate.theta_hat)
        )
        logger.debug(
            f"PE phase {self.phase}: {samples} samples, width {width:.4g}, "
            f"survivors {before} -> {self._survivors.size}"
        )


class RandomSolver:
    """Uniform play over all arms; never eliminates."""

    def __init__(self, n_arms: int, rng: np.random.Generator) -> None:
        self.n_arms = n_arms
        self.rng = rng

    @property
    def survivors(self) -> np.ndarray:
        return np.arange(self.n_arms)

    def propose(self) -> int:
        return int(self.rng.integers(self.n_arms))

    def observe(self, index: int, reward: float) -> None:
        pass


def pe_factory(
    conf: ConfidenceSchedule, horizon: int, delta: float, net_size: int | None = None
) -> SolverFactory:
    def make(arms: np.ndarray, known_eps: float | None = None) -> Solver:
        return PhasedElimination(arms, horizon, conf, delta, known_eps=known_eps, net_size=net_size)

    return make


def random_factory(rng: np.random.Generator) -> SolverFactory:
    def make(arms: np.ndarray, known_eps: float | None = None) -> Solver:
        return RandomSolver(len(arms), rng)

    return make

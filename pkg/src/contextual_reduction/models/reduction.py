"""Reduction state: g-tables, schedules and diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .geometry import ParameterNet


class GMode(Enum):
    EXACT = "exact"
    EMPIRICAL = "empirical"


@dataclass(eq=False)
class GTable:
    """Estimates of g(theta) for every point of a net.

    In empirical mode `vectors` holds running means of the greedy action over
    the contexts seen so far and `counts` how many contexts were averaged.
    """

    net: ParameterNet
    vectors: np.ndarray  # (n, d)
    counts: np.ndarray  # (n,)
    mode: GMode

    def snapshot(self) -> np.ndarray:
        """Copy of the current vectors, safe to hand to a solver."""
        return self.vectors.copy()


@dataclass(frozen=True, eq=False)
class EpochSchedule:
    """Boundaries t^(1) = 0 < ... < t^(M+1) = T. Epoch m covers rounds t^(m)+1 .. t^(m+1)."""

    boundaries: np.ndarray
    epsilons: np.ndarray

    @property
    def n_epochs(self) -> int:
        return int(self.boundaries.size - 1)

    @property
    def horizon(self) -> int:
        return int(self.boundaries[-1])

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.boundaries)

    def epoch_range(self, m: int) -> tuple[int, int]:
        """First and last round (1-based, inclusive) of epoch m (1-based)."""
        return int(self.boundaries[m - 1]) + 1, int(self.boundaries[m])


class ConfidenceVariant(Enum):
    PLAIN = "plain"
    MISSPEC_KNOWN = "misspec-known"
    MISSPEC_UNKNOWN = "misspec-unknown"
    CORRUPTION = "corruption"
    SPARSE = "sparse"
    STRUCTURED = "structured"
    BATCHED = "batched"


@dataclass(frozen=True)
class ConfidenceSchedule:
    """Which confidence-width rule PE uses, with the rule's parameters."""

    variant: ConfidenceVariant = ConfidenceVariant.PLAIN
    epsilon: float = 0.0  # misspec-known
    budget: float = 0.0  # corruption C
    sparsity: int | None = None  # sparse and structured s
    batches: int | None = None  # batched M


@dataclass(frozen=True, eq=False)
class ProductReduction:
    """Lift of a d-dimensional product instance to a 2d-dimensional linear bandit.

    Coordinate i owns the pair (2i, 2i+1): the first entry selects the
    coordinate max, the second the min.
    """

    expected_max: np.ndarray  # E[max A^(i)]
    expected_min: np.ndarray  # E[min A^(i)]
    theta_prime_star: np.ndarray  # oracle only

    @property
    def dim(self) -> int:
        return int(self.expected_max.size)

    @property
    def lifted_dim(self) -> int:
        return 2 * self.dim

    @staticmethod
    def lift(theta: np.ndarray) -> np.ndarray:
        """a'(theta): one-hot per coordinate pair, max side when theta_i >= 0."""
        theta = np.asarray(theta, dtype=float)
        lifted = np.zeros(2 * theta.size)
        takes_max = theta >= 0
        lifted[0::2] = takes_max
        lifted[1::2] = ~takes_max
        return lifted


@dataclass(frozen=True, eq=False)
class MartingaleDiagnostic:
    """Running sums from the regret decomposition of the known-distribution reduction."""

    sigma: np.ndarray  # running Sigma_T
    sigma_prime: np.ndarray  # running Sigma'_T
    eta_prime: np.ndarray  # per-round reduced-instance noise
    increment_bound: float
    delta: float

    @property
    def horizon(self) -> int:
        return int(self.sigma.size)

    @property
    def sigma_final(self) -> float:
        return float(self.sigma[-1]) if self.sigma.size else 0.0

    @property
    def sigma_prime_final(self) -> float:
        return float(self.sigma_prime[-1]) if self.sigma_prime.size else 0.0

    @property
    def envelope(self) -> float:
        """2 * sqrt(2 T ln(2/delta)) * increment bound."""
        return float(
            2.0 * np.sqrt(2.0 * self.horizon * np.log(2.0 / self.delta)) * self.increment_bound
        )

    @property
    def within_envelope(self) -> bool:
        return abs(self.sigma_final) <= self.envelope


@dataclass
class PhaseRecord:
    """One elimination phase of a PE solver."""

    phase: int
    samples: int
    width: float
    survivors_before: int
    survivors_after: int
    theta_hat: np.ndarray = field(default_factory=lambda: np.zeros(0))

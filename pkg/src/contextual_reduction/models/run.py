"""Run configuration, regret traces and scaling reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .environment import NoiseKind


class Algorithm(Enum):
    """Algorithms a run can execute."""

    KNOWN_DIST = "known-dist"
    EPOCH = "epoch"
    PRODUCT = "product"
    BATCHED = "batched"
    PE_MISSPEC_KNOWN = "pe-misspec-known"
    PE_MISSPEC_UNKNOWN = "pe-misspec-unknown"
    PE_CORRUPT = "pe-corrupt"
    PE_SPARSE = "pe-sparse"
    PE_STRUCTURED = "pe-structured"
    RANDOM_BASELINE = "random-baseline"


class NetSource(Enum):
    DENSE = "dense"
    SPARSE = "sparse"
    STRUCTURED = "structured"
    FILE = "file"


@dataclass(frozen=True)
class NetSpec:
    """How to obtain the parameter net of a run."""

    source: NetSource = NetSource.DENSE
    resolution: float = 0.25
    sparsity: int | None = None  # sparse
    latent_dim: int | None = None  # structured
    path: str | None = None  # file


@dataclass(frozen=True)
class RunConfig:
    """A fully specified experiment: one suite, one algorithm, many seeds."""

    suite: str
    algorithm: Algorithm
    dim: int
    horizon: int
    net: NetSpec = field(default_factory=NetSpec)
    delta: float = 0.1
    seeds: tuple[int, ...] = (0,)
    instance_seed: int = 0
    epsilon: float | None = None
    budget: float | None = None
    sparsity: int | None = None
    batches: int = 8
    noise: NoiseKind | None = None  # overrides the suite's noise model
    known_distribution: bool = False  # PE variants skip the epoch reduction and read exact g
    workers: int = 1


@dataclass(frozen=True)
class EpochRecord:
    """Per-epoch (or per-batch) summary."""

    index: int
    start: int  # first round, 1-based
    end: int  # last round, inclusive
    epsilon: float  # eps_m handed to the solver
    epsilon_realized: float  # eps'_m, oracle-computed
    gamma: float  # last confidence width used in the epoch
    survivors: int  # surviving net points at epoch end


@dataclass(eq=False)
class RegretTrace:
    """Per-round record of one seeded run."""

    algorithm: str
    seed: int
    proposals: np.ndarray  # solver's arm index per round
    regret: np.ndarray  # instantaneous contextual regret
    reduced_regret: np.ndarray  # instantaneous regret of the reduced instance
    reward: np.ndarray
    clean_mean: np.ndarray  # <a_t, theta*>
    optimal_value: np.ndarray  # max_a <a, theta*> over the context
    corruption: np.ndarray
    epoch: np.ndarray  # 1-based epoch/batch index per round
    context_ids: np.ndarray  # finite-support index per round, -1 otherwise
    epochs: list[EpochRecord] = field(default_factory=list)
    policy_changes: list[int] = field(default_factory=list)
    final_survivors: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def horizon(self) -> int:
        return int(self.regret.size)

    @property
    def cum_regret(self) -> np.ndarray:
        return np.cumsum(self.regret)

    @property
    def cum_reduced_regret(self) -> np.ndarray:
        return np.cumsum(self.reduced_regret)

    @property
    def final_regret(self) -> float:
        return float(self.regret.sum())

    @property
    def final_reduced_regret(self) -> float:
        return float(self.reduced_regret.sum())

    @property
    def regret_gap(self) -> float:
        """|contextual regret - reduced regret| at the horizon."""
        return abs(self.final_regret - self.final_reduced_regret)


@dataclass
class RunFailure:
    """A seed that raised instead of producing a trace."""

    seed: int
    message: str
    code: str | None = None


@dataclass(frozen=True)
class ScalingRow:
    horizon: int
    mean: float
    std: float
    runs: int
    envelope: float  # c * d * sqrt(T log T)
    exceeds: bool


@dataclass(frozen=True)
class ScalingReport:
    """Log-log fit of mean final regret against the horizon."""

    rows: tuple[ScalingRow, ...]
    alpha: float
    intercept: float
    residuals: tuple[float, ...]
    constant: float  # envelope constant calibrated at the smallest horizon
    dim: int

    @property
    def within_envelope(self) -> bool:
        return not any(row.exceeds for row in self.rows)

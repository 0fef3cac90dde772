"""Parameter nets and experimental designs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

NORM_TOLERANCE = 1e-12


class NetKind(Enum):
    """How a parameter net was constructed."""

    DENSE = "dense-grid"
    SPARSE = "sparse"
    STRUCTURED = "structured"
    USER = "user-supplied"


@dataclass(frozen=True, eq=False)
class ParameterNet:
    """A finite subset of the unit ball used as the learner's parameter space."""

    points: np.ndarray  # (n, d)
    ambient_dim: int
    target_radius: float  # intended covering radius
    kind: NetKind
    sparsity: int | None = None  # set for sparse nets
    resolution: float | None = None

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float, ndmin=2)
        if points.shape[1] != self.ambient_dim:
            raise ValueError(
                f"points have dimension {points.shape[1]}, expected {self.ambient_dim}"
            )
        if points.shape[0] == 0:
            raise ValueError("a parameter net needs at least one point")
        norms = np.linalg.norm(points, axis=1)
        if np.any(norms > 1 + NORM_TOLERANCE):
            raise ValueError(f"net point outside the unit ball (norm {norms.max():.6g})")
        if len(np.unique(points, axis=0)) != len(points):
            raise ValueError("net points must be pairwise distinct, found duplicate points")
        if self.target_radius <= 0:
            raise ValueError("target_radius must be positive")
        if self.sparsity is not None and np.any(
            np.count_nonzero(points, axis=1) > self.sparsity
        ):
            raise ValueError(f"net point has more than {self.sparsity} nonzero coordinates")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def nearest_index(self, theta: np.ndarray) -> int:
        """Index of the net point closest to `theta` (lowest index on ties)."""
        distances = np.linalg.norm(self.points - np.asarray(theta, dtype=float), axis=1)
        return int(np.argmin(distances))


@dataclass(frozen=True, eq=False)
class DesignWeights:
    """A probability design over actions with its Gram matrix."""

    support: np.ndarray  # (k, d) support actions
    weights: np.ndarray  # (k,) sums to one
    gram: np.ndarray  # (d, d) G(rho)
    gram_pinv: np.ndarray  # (d, d) pseudo-inverse of G(rho)
    support_indices: np.ndarray  # (k,) rows of the input action list
    allocations: np.ndarray | None = None  # u(x) = ceil(rho(x) * batch_length)
    batch_length: int | None = None
    iterations: int = 0

    @property
    def dim(self) -> int:
        return int(self.support.shape[1])

    def leverages(self, actions: np.ndarray) -> np.ndarray:
        """a^T G^+ a for each row of `actions`."""
        actions = np.atleast_2d(np.asarray(actions, dtype=float))
        return np.maximum(np.einsum("ij,jk,ik->i", actions, self.gram_pinv, actions), 0.0)

    def max_leverage(self, actions: np.ndarray | None = None) -> float:
        target = self.support if actions is None else actions
        return float(self.leverages(target).max())


@dataclass(frozen=True, eq=False)
class Estimate:
    """Least-squares estimate of the unknown parameter."""

    theta_hat: np.ndarray
    gram_inverse: np.ndarray
    sample_count: int
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

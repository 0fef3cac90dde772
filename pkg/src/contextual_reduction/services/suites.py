"""Named, reproducible benchmark instances."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..models.environment import (
    ActionSet,
    AdversarySpec,
    AdversaryStrategy,
    ContextDistribution,
    CoordinateDistribution,
    EnvironmentSpec,
    Misspecification,
    NoiseKind,
)
from ..models.errors import UnknownSuiteName

logger = logging.getLogger(__name__)

STANDARD_SUITES = (
    "example1",
    "random-finite",
    "product",
    "sparse",
    "misspec",
    "corrupt",
    "structured",
)


@dataclass(frozen=True)
class SuiteSpec:
    """Recipe for a benchmark instance. `base` picks the standard construction."""

    name: str
    base: str
    dim: int = 3
    seed: int = 0
    noise: NoiseKind = NoiseKind.GAUSSIAN
    epsilon: float | None = None  # misspecification level
    budget: float | None = None  # corruption budget C
    adversary: AdversaryStrategy = AdversaryStrategy.FLIP_OPTIMAL
    sparsity: int | None = None
    latent_dim: int | None = None
    supports: int = 5
    actions_per_support: int = 10
    theta_star: tuple[float, ...] | None = None


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _random_finite(rng: np.random.Generator, spec: SuiteSpec) -> ContextDistribution:
    supports = []
    for _ in range(spec.supports):
        raw = rng.standard_normal((spec.actions_per_support, spec.dim))
        supports.append(ActionSet(raw / np.linalg.norm(raw, axis=1, keepdims=True)))
    return ContextDistribution.finite(supports, rng.dirichlet(np.ones(spec.supports)))


def _random_product(rng: np.random.Generator, spec: SuiteSpec) -> ContextDistribution:
    # coordinate magnitudes bounded by 1/sqrt(d) keep every product action in the ball
    scale = 1.0 / np.sqrt(spec.dim)
    coordinates = []
    for _ in range(spec.dim):
        value_sets = [np.sort(rng.uniform(-scale, scale, size=2)) for _ in range(2)]
        coordinates.append(CoordinateDistribution(tuple(value_sets), rng.dirichlet(np.ones(2))))
    return ContextDistribution.product(coordinates)


def example1_distribution() -> ContextDistribution:
    """Supports {[1], [-1]} and {[1]}, each with probability 1/2."""
    return ContextDistribution.finite(
        [ActionSet(np.array([[1.0], [-1.0]])), ActionSet(np.array([[1.0]]))], [0.5, 0.5]
    )


def structured_embedding(dim: int, latent_dim: int, seed: int) -> np.ndarray:
    """Seeded (dim, latent_dim) matrix with orthonormal columns (1-Lipschitz)."""
    if not 1 <= latent_dim <= dim:
        raise ValueError(f"latent_dim must be in [1, {dim}]")
    rng = np.random.default_rng([seed, dim, latent_dim])
    q, _ = np.linalg.qr(rng.standard_normal((dim, latent_dim)))
    return q


def _theta_star(rng: np.random.Generator, spec: SuiteSpec, base: str) -> np.ndarray:
    if spec.theta_star is not None:
        return np.asarray(spec.theta_star, dtype=float)
    if base == "example1":
        return np.array([1.0])
    if base == "sparse":
        s = spec.sparsity or 2
        theta = np.zeros(spec.dim)
        support = rng.choice(spec.dim, size=s, replace=False)
        theta[support] = _unit(rng, s)
        return theta
    if base == "structured":
        latent = spec.latent_dim or 2
        return structured_embedding(spec.dim, latent, spec.seed) @ _unit(rng, latent)
    return _unit(rng, spec.dim)


def build_suite(spec: SuiteSpec) -> tuple[ContextDistribution, EnvironmentSpec]:
    """Build the instance described by `spec`; identical specs give identical instances."""
    base = spec.base
    if base not in STANDARD_SUITES:
        raise UnknownSuiteName(f"unknown suite base {base!r}; choose from {', '.join(STANDARD_SUITES)}")
    if base == "example1" and spec.dim != 1:
        raise ValueError("example1 is one-dimensional")

    rng = np.random.default_rng(spec.seed)
    if base == "example1":
        dist = example1_distribution()
    elif base == "product":
        dist = _random_product(rng, spec)
    else:
        dist = _random_finite(rng, spec)
    theta = _theta_star(rng, spec, base)

    epsilon = spec.epsilon if spec.epsilon is not None else (0.1 if base == "misspec" else None)
    misspec = None
    if epsilon:
        if dist.is_finite:
            actions = dist.all_actions()
            values = rng.uniform(-epsilon, epsilon, size=len(actions))
            table = {tuple(float(x) for x in a): float(v) for a, v in zip(actions, values)}
            misspec = Misspecification(epsilon, table=table)
        else:
            misspec = Misspecification(epsilon, direction=_unit(rng, spec.dim))

    budget = spec.budget if spec.budget is not None else (20.0 if base == "corrupt" else None)
    adversary = None
    if budget:
        target = None
        if spec.adversary == AdversaryStrategy.CONSTANT_BIAS:
            if not dist.is_finite:
                raise ValueError("constant-bias adversary needs a finite-support suite")
            target = dist.supports[0].argmax(theta).copy()
        adversary = AdversarySpec(spec.adversary, budget, target=target)

    sparsity = (spec.sparsity or 2) if base == "sparse" else spec.sparsity
    env = EnvironmentSpec(
        theta_star=theta, noise=spec.noise, misspec=misspec, adversary=adversary, sparsity=sparsity
    )
    logger.debug(f"Built suite {spec.name} (base {base}, dim {spec.dim}, seed {spec.seed})")
    return dist, env


def make_standard_suite(
    name: str, dim: int, rng_seed: int, **options: object
) -> tuple[ContextDistribution, EnvironmentSpec]:
    """One of the standard instances; `options` override SuiteSpec fields."""
    if name not in STANDARD_SUITES:
        raise UnknownSuiteName(f"unknown suite {name!r}; choose from {', '.join(STANDARD_SUITES)}")
    return build_suite(SuiteSpec(name=name, base=name, dim=dim, seed=rng_seed, **options))  # type: ignore[arg-type]

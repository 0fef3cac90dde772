"""Seeded execution of a RunConfig, optionally across worker processes."""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..models.environment import ContextDistribution, EnvironmentSpec
from ..models.errors import ReductionError, RunFailed
from ..models.geometry import ParameterNet
from ..models.reduction import ConfidenceSchedule, ConfidenceVariant
from ..models.run import Algorithm, NetSource, RegretTrace, RunConfig, RunFailure
from .nets import build_dense_net, build_sparse_net, build_structured_net, load_net
from .reductions import reduce_known_dist, run_batched, run_epoch_reduction, run_product_reduction
from .schedules import doubling_schedule
from .simulator import RunStreams
from .solvers import SolverFactory, pe_factory, random_factory
from .suite_store import get_suite_store
from .suites import structured_embedding

logger = logging.getLogger(__name__)

_PE_VARIANTS = {
    Algorithm.KNOWN_DIST: ConfidenceVariant.PLAIN,
    Algorithm.PE_MISSPEC_KNOWN: ConfidenceVariant.MISSPEC_KNOWN,
    Algorithm.PE_MISSPEC_UNKNOWN: ConfidenceVariant.MISSPEC_UNKNOWN,
    Algorithm.PE_CORRUPT: ConfidenceVariant.CORRUPTION,
    Algorithm.PE_SPARSE: ConfidenceVariant.SPARSE,
    Algorithm.PE_STRUCTURED: ConfidenceVariant.STRUCTURED,
}


def resolve_instance(config: RunConfig) -> tuple[ContextDistribution, EnvironmentSpec, int]:
    """Distribution, environment and the seed the instance was built from."""
    store = get_suite_store()
    preset = store.get(config.suite)
    dist, env = store.resolve(config.suite, config.dim, config.instance_seed)
    if config.noise is not None:
        env = dataclasses.replace(env, noise=config.noise)
    return dist, env, preset.seed if preset is not None else config.instance_seed


def build_net(config: RunConfig, dim: int, instance_seed: int) -> ParameterNet:
    spec = config.net
    if spec.source == NetSource.SPARSE:
        return build_sparse_net(dim, spec.sparsity or config.sparsity or 1, spec.resolution)
    if spec.source == NetSource.STRUCTURED:
        latent = spec.latent_dim or 1
        return build_structured_net(latent, structured_embedding(dim, latent, instance_seed), spec.resolution)
    if spec.source == NetSource.FILE:
        return load_net(Path(spec.path or ""))
    return build_dense_net(dim, spec.resolution)


def confidence_for(config: RunConfig, env: EnvironmentSpec) -> ConfidenceSchedule:
    """Confidence rule of a PE algorithm; missing parameters fall back to the instance."""
    variant = _PE_VARIANTS.get(config.algorithm, ConfidenceVariant.PLAIN)
    epsilon = config.epsilon
    if epsilon is None:
        epsilon = env.misspec.epsilon if env.misspec is not None else 0.0
    budget = config.budget
    if budget is None:
        budget = env.adversary.budget if env.adversary is not None else 0.0
    sparsity = config.sparsity or env.sparsity or config.net.sparsity
    if variant == ConfidenceVariant.STRUCTURED:
        sparsity = config.net.latent_dim or config.sparsity
    return ConfidenceSchedule(variant, epsilon=epsilon, budget=budget, sparsity=sparsity)


def execute_seed(config: RunConfig, seed: int) -> RegretTrace:
    """One seeded run. Identical (config, seed) pairs give identical traces."""
    dist, env, instance_seed = resolve_instance(config)
    net = build_net(config, env.dim, instance_seed)
    streams = RunStreams.from_seed(seed)
    horizon = config.horizon
    algorithm = config.algorithm
    name = algorithm.value

    factory: SolverFactory
    if algorithm == Algorithm.RANDOM_BASELINE:
        factory = random_factory(streams.algorithm)
    else:
        factory = pe_factory(confidence_for(config, env), horizon, config.delta, len(net))

    if algorithm == Algorithm.PRODUCT or (
        not dist.is_finite and algorithm in (Algorithm.KNOWN_DIST, Algorithm.EPOCH, Algorithm.RANDOM_BASELINE)
    ):
        return run_product_reduction(env, dist, net, factory, horizon, streams, seed, name)
    if algorithm == Algorithm.EPOCH:
        schedule = doubling_schedule(horizon, len(net), config.delta)
        conf = ConfidenceSchedule(ConfidenceVariant.PLAIN)
        return run_epoch_reduction(env, dist, net, schedule, conf, config.delta, streams, seed, factory, name)
    if algorithm == Algorithm.BATCHED:
        return run_batched(env, dist, net, config.batches, config.delta, streams, horizon, seed, name)
    if algorithm in _PE_VARIANTS and algorithm != Algorithm.KNOWN_DIST and not config.known_distribution:
        # per-epoch eps_m widens the variant rule inside each fresh solver
        schedule = doubling_schedule(horizon, len(net), config.delta)
        conf = confidence_for(config, env)
        return run_epoch_reduction(env, dist, net, schedule, conf, config.delta, streams, seed, factory, name)
    return reduce_known_dist(env, dist, net, factory, horizon, streams, seed, name)


def _execute_seed_safely(config: RunConfig, seed: int) -> RegretTrace | RunFailure:
    start = time.monotonic()
    try:
        trace = execute_seed(config, seed)
    except ReductionError as e:
        return RunFailure(seed=seed, message=e.message, code=e.code)
    except (ValueError, OSError) as e:
        return RunFailure(seed=seed, message=str(e), code=type(e).__name__)

    elapsed_ms = (time.monotonic() - start) * 1000
    logger.info(
        f"{trace.algorithm} seed={seed} T={trace.horizon}: "
        f"regret={trace.final_regret:.3f} ({elapsed_ms:.0f} ms)"
    )
    return trace


def run_outcomes(config: RunConfig) -> list[RegretTrace | RunFailure]:
    """One outcome per seed, in seed order."""
    logger.info(
        f"Running {config.algorithm.value} on {config.suite}: T={config.horizon}, "
        f"{len(config.seeds)} seed(s), {config.workers} worker(s)"
    )
    if config.workers <= 1 or len(config.seeds) <= 1:
        return [_execute_seed_safely(config, seed) for seed in config.seeds]

    workers = min(config.workers, len(config.seeds))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_execute_seed_safely, config, seed) for seed in config.seeds]
        return [f.result() for f in futures]


def run(config: RunConfig) -> list[RegretTrace]:
    """Traces for every seed; raises RunFailed naming each failing seed."""
    outcomes = run_outcomes(config)
    failures = [o for o in outcomes if isinstance(o, RunFailure)]
    if failures:
        raise RunFailed(failures)
    return [o for o in outcomes if isinstance(o, RegretTrace)]


def nominal_dense_net_size(dim: int, horizon: int) -> int:
    """(6T)^d, the size of a 1/T-net of the unit ball."""
    return int(math.ceil(6 * horizon)) ** dim

"""Acceptance checks behind the `verify` verb.

Each check runs at desk scale and reports a pass flag with a one-line
detail. `quick=True` shrinks horizons and seed counts for smoke runs.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np

from ..models.environment import NoiseKind
from ..models.reduction import ConfidenceSchedule, ConfidenceVariant, ProductReduction
from ..models.run import Algorithm, RunConfig
from .design import g_optimal_design, support_cap
from .diagnostics import martingale_diagnostics
from .nets import build_dense_net, build_sparse_net
from .oracles import exact_g_many, exact_g_product, product_reduction
from .reductions import reduce_known_dist
from .runner import build_net, nominal_dense_net_size, resolve_instance, run
from .scaling import scaling_fit
from .schedules import batched_schedule
from .simulator import RunStreams
from .solvers import pe_factory
from .suites import SuiteSpec, build_suite, make_standard_suite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed_s: float = 0.0


@dataclass(frozen=True)
class Scale:
    """Horizons and seed counts of one verification pass."""

    rate_horizons: tuple[int, ...]
    rate_seeds: int
    gap_horizon: int
    gap_seeds: int
    misspec_horizon: int
    misspec_seeds: int
    batched_horizon: int
    corrupt_horizon: int
    corrupt_seeds: int
    sparse_horizon: int
    sparse_seeds: int
    martingale_horizon: int
    martingale_seeds: int

    @classmethod
    def full(cls) -> Scale:
        return cls(
            rate_horizons=tuple(2**k for k in range(12, 17)),
            rate_seeds=10,
            gap_horizon=2**14,
            gap_seeds=100,
            misspec_horizon=2**14,
            misspec_seeds=200,
            batched_horizon=65536,
            corrupt_horizon=2**13,
            corrupt_seeds=100,
            sparse_horizon=2**14,
            sparse_seeds=10,
            martingale_horizon=2**13,
            martingale_seeds=200,
        )

    @classmethod
    def quick(cls) -> Scale:
        return cls(
            rate_horizons=tuple(2**k for k in range(9, 13)),
            rate_seeds=3,
            gap_horizon=2**11,
            gap_seeds=10,
            misspec_horizon=2**11,
            misspec_seeds=10,
            batched_horizon=4096,
            corrupt_horizon=2**11,
            corrupt_seeds=10,
            sparse_horizon=2**11,
            sparse_seeds=3,
            martingale_horizon=2**11,
            martingale_seeds=20,
        )


def _config(suite: str, algorithm: Algorithm, dim: int, horizon: int, seeds: int, workers: int, **kw) -> RunConfig:
    return RunConfig(
        suite=suite,
        algorithm=algorithm,
        dim=dim,
        horizon=horizon,
        seeds=tuple(range(seeds)),
        workers=workers,
        **kw,
    )


def check_rate(scale: Scale, workers: int) -> tuple[bool, str]:
    groups = {}
    for T in scale.rate_horizons:
        config = _config("random-finite", Algorithm.EPOCH, 3, T, scale.rate_seeds, workers)
        groups[T] = run(config)
    report = scaling_fit(groups, dim=3)
    passed = 0.40 <= report.alpha <= 0.62 and report.within_envelope
    return passed, f"alpha={report.alpha:.3f}, within envelope={report.within_envelope}"


def check_reduction_gap(scale: Scale, workers: int) -> tuple[bool, str]:
    delta = 0.05
    T = scale.gap_horizon
    bound = 3.0 * math.sqrt(T * math.log(1 / delta))
    details = []
    passed = True
    for suite, dim in (("example1", 1), ("random-finite", 3)):
        traces = run(_config(suite, Algorithm.KNOWN_DIST, dim, T, scale.gap_seeds, workers, delta=delta))
        share = np.mean([trace.regret_gap <= bound for trace in traces])
        passed &= share >= 0.9
        details.append(f"{suite}: {share:.0%}")
    return bool(passed), f"gap <= {bound:.1f} on " + ", ".join(details)


def check_misspecification_envelope(scale: Scale, workers: int) -> tuple[bool, str]:
    traces = run(_config("random-finite", Algorithm.EPOCH, 3, scale.misspec_horizon, scale.misspec_seeds, workers))
    ok = [all(e.epsilon_realized <= e.epsilon for e in trace.epochs) for trace in traces]
    share = float(np.mean(ok))
    return share >= 0.9, f"eps'_m <= eps_m for all epochs on {share:.0%} of seeds"


def check_product_exactness(scale: Scale, workers: int) -> tuple[bool, str]:
    worst_gap = 0.0
    worst_norm = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(1, 7))
        dist, env = make_standard_suite("product", dim, seed)
        lifted = product_reduction(dist, env.theta_star)
        thetas = rng.standard_normal((1000, dim))
        for theta in thetas:
            lhs = ProductReduction.lift(theta) @ lifted.theta_prime_star
            rhs = exact_g_product(dist, theta) @ env.theta_star
            worst_gap = max(worst_gap, abs(lhs - rhs))
        worst_norm = max(worst_norm, float(np.linalg.norm(lifted.theta_prime_star)))
    return worst_gap <= 1e-10 and worst_norm <= 2.0, f"max gap {worst_gap:.2e}, max |theta'*| {worst_norm:.3f}"


def check_g_identity(scale: Scale, workers: int) -> tuple[bool, str]:
    worst = 0.0
    net = build_dense_net(2, 0.1)
    for seed in range(20):
        dist, _ = make_standard_suite("random-finite", 2, seed)
        values = exact_g_many(dist, net.points) @ net.points.T  # [theta, theta'] = <g(theta), theta'>
        worst = max(worst, float(np.max(values - np.diag(values)[None, :])))
    return worst <= 1e-12, f"max violation {worst:.2e} over {len(net)}-point nets"


def check_design_feasibility(scale: Scale, workers: int) -> tuple[bool, str]:
    failures = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(2, 9))
        n = int(rng.integers(10, 201))
        actions = rng.standard_normal((n, dim))
        actions /= np.linalg.norm(actions, axis=1, keepdims=True)
        design = g_optimal_design(actions)
        if design.max_leverage(actions) > 2 * dim + 1e-6 or len(design.weights) > support_cap(dim):
            failures += 1
    return failures == 0, f"{100 - failures}/100 designs feasible"


def check_batch_discipline(scale: Scale, workers: int) -> tuple[bool, str]:
    T = scale.batched_horizon
    config = _config("random-finite", Algorithm.BATCHED, 3, T, 1, workers, noise=NoiseKind.NONE)
    trace = run(config)[0]
    schedule = batched_schedule(T, config.batches)
    expected = [int(b) + 1 for b in schedule.boundaries[:-1]]
    dist, env, instance_seed = resolve_instance(config)
    net = build_net(config, env.dim, instance_seed)
    nearest = net.nearest_index(env.theta_star)
    policies = len(trace.policy_changes)
    matches = trace.policy_changes == expected
    survives = bool(nearest in trace.final_survivors)
    passed = matches and policies <= config.batches + 1 and survives
    return passed, f"{policies} policies, schedule match={matches}, nearest survives={survives}"


def _optimal_indices(config: RunConfig) -> np.ndarray:
    dist, env, instance_seed = resolve_instance(config)
    net = build_net(config, env.dim, instance_seed)
    values = exact_g_many(dist, net.points) @ env.theta_star
    return np.flatnonzero(values >= values.max() - 1e-12)


def check_corruption_robustness(scale: Scale, workers: int) -> tuple[bool, str]:
    T, seeds = scale.corrupt_horizon, scale.corrupt_seeds
    robust = replace(_config("corrupt", Algorithm.PE_CORRUPT, 3, T, seeds, workers), known_distribution=True)
    plain = replace(robust, algorithm=Algorithm.KNOWN_DIST)
    optimal = _optimal_indices(robust)

    def kept(traces) -> float:
        return float(np.mean([np.isin(optimal, trace.final_survivors).any() for trace in traces]))

    robust_share = kept(run(robust))
    plain_lost = 1.0 - kept(run(plain))
    passed = robust_share >= 0.95 and plain_lost >= 0.30
    return passed, f"corruption-aware keeps optimum on {robust_share:.0%}, plain loses it on {plain_lost:.0%}"


def check_sparse_advantage(scale: Scale, workers: int) -> tuple[bool, str]:
    """Sparse-aware PE against plain PE priced as if it ran on a dense net.

    A 1/T-net of the 20-dimensional ball is far beyond the point cap, so both
    arms play the same sparse net and the dense arm only pays the plain
    confidence width at the nominal size (6T)^d. The ratio compares widths,
    not approximation error.
    """
    T, seeds = scale.sparse_horizon, scale.sparse_seeds
    dim, s = 20, 2
    dist, env = build_suite(SuiteSpec(name="sparse", base="sparse", dim=dim, seed=0, sparsity=s))
    net = build_sparse_net(dim, s, 0.5)
    sparse_conf = ConfidenceSchedule(ConfidenceVariant.SPARSE, sparsity=s)
    plain_conf = ConfidenceSchedule(ConfidenceVariant.PLAIN)
    nominal = nominal_dense_net_size(dim, T)

    sparse_regret, dense_regret = [], []
    sparse_factory = pe_factory(sparse_conf, T, 0.1, len(net))
    dense_factory = pe_factory(plain_conf, T, 0.1, nominal)
    for seed in range(seeds):
        for factory, sink in ((sparse_factory, sparse_regret), (dense_factory, dense_regret)):
            trace = reduce_known_dist(env, dist, net, factory, T, RunStreams.from_seed(seed), seed)
            sink.append(trace.final_regret)
    ratio = float(np.mean(sparse_regret) / max(np.mean(dense_regret), 1e-12))
    return ratio <= 0.8, f"sparse/dense mean regret ratio {ratio:.3f} (dense arm: width proxy at |net|={nominal:.3g})"


def check_martingale_envelope(scale: Scale, workers: int) -> tuple[bool, str]:
    delta = 0.05
    config = _config(
        "random-finite", Algorithm.KNOWN_DIST, 3, scale.martingale_horizon, scale.martingale_seeds, workers, delta=delta
    )
    dist, env, instance_seed = resolve_instance(config)
    net = build_net(config, env.dim, instance_seed)
    within = [martingale_diagnostics(trace, dist, net, env, delta).within_envelope for trace in run(config)]
    share = float(np.mean(within))
    return share >= 0.95, f"|Sigma_T| within the Azuma envelope on {share:.0%} of seeds"


CHECKS: dict[int, tuple[str, Callable[[Scale, int], tuple[bool, str]]]] = {
    1: ("rate", check_rate),
    2: ("reduction-gap", check_reduction_gap),
    3: ("misspecification-envelope", check_misspecification_envelope),
    4: ("product-exactness", check_product_exactness),
    5: ("g-identity", check_g_identity),
    6: ("design-feasibility", check_design_feasibility),
    7: ("batch-discipline", check_batch_discipline),
    8: ("corruption-robustness", check_corruption_robustness),
    9: ("sparse-advantage", check_sparse_advantage),
    10: ("martingale-envelope", check_martingale_envelope),
}


def run_verification(
    quick: bool = False, workers: int = 1, only: list[int] | None = None
) -> list[CheckResult]:
    scale = Scale.quick() if quick else Scale.full()
    results = []
    for number in only or sorted(CHECKS):
        name, check = CHECKS[number]
        start = time.monotonic()
        passed, detail = check(scale, workers)
        elapsed = time.monotonic() - start
        logger.info(f"Check {number} ({name}): {'pass' if passed else 'FAIL'} - {detail}")
        results.append(CheckResult(number, name, passed, detail, elapsed))
    return results


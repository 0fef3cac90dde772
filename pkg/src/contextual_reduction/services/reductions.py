"""Reductions from contextual linear bandits to linear bandits over a parameter net."""

from __future__ import annotations

import logging

import numpy as np

from ..models.environment import ContextDistribution, EnvironmentSpec, RoundOutcome
from ..models.errors import BatchTooShort, DegenerateActions
from ..models.geometry import ParameterNet
from ..models.reduction import ConfidenceSchedule, ConfidenceVariant, EpochSchedule
from ..models.run import EpochRecord, RegretTrace
from .contexts import sample_context_indexed
from .design import allocate_to_length, g_optimal_design, least_squares_from_sums
from .oracles import (
    empirical_g_update,
    exact_g_many,
    new_empirical_table,
    product_arm_set,
    product_physical_action,
    product_reduction,
)
from .schedules import batched_schedule, confidence_gamma, validate_schedule
from .simulator import CorruptionAdversary, RunStreams, play
from .solvers import SolverFactory, pe_factory

logger = logging.getLogger(__name__)


class TraceRecorder:
    """Per-round arrays of one run, filled as rounds are played."""

    def __init__(self, env: EnvironmentSpec, dist: ContextDistribution, net: ParameterNet, horizon: int) -> None:
        theta = env.theta_star
        # <g(theta), theta*> for every net point, and the benchmark <g(theta*), theta*>
        self.net_values = exact_g_many(dist, net.points) @ theta
        self.best_value = float(exact_g_many(dist, theta[None, :])[0] @ theta)
        self.horizon = horizon
        self.proposals = np.zeros(horizon, dtype=np.int64)
        self.regret = np.zeros(horizon)
        self.reduced_regret = np.zeros(horizon)
        self.reward = np.zeros(horizon)
        self.clean_mean = np.zeros(horizon)
        self.optimal_value = np.zeros(horizon)
        self.corruption = np.zeros(horizon)
        self.epoch = np.zeros(horizon, dtype=np.int64)
        self.context_ids = np.full(horizon, -1, dtype=np.int64)

    def record(self, t: int, index: int, outcome: RoundOutcome, epoch: int, context_id: int) -> None:
        """Store round t (1-based)."""
        i = t - 1
        self.proposals[i] = index
        self.regret[i] = outcome.instantaneous_regret
        self.reduced_regret[i] = self.best_value - self.net_values[index]
        self.reward[i] = outcome.observed_reward
        self.clean_mean[i] = outcome.clean_mean
        self.optimal_value[i] = outcome.optimal_value
        self.corruption[i] = outcome.corruption_applied
        self.epoch[i] = epoch
        self.context_ids[i] = context_id

    def finish(
        self,
        algorithm: str,
        seed: int,
        epochs: list[EpochRecord] | None = None,
        policy_changes: list[int] | None = None,
        survivors: np.ndarray | None = None,
    ) -> RegretTrace:
        return RegretTrace(
            algorithm=algorithm,
            seed=seed,
            proposals=self.proposals,
            regret=self.regret,
            reduced_regret=self.reduced_regret,
            reward=self.reward,
            clean_mean=self.clean_mean,
            optimal_value=self.optimal_value,
            corruption=self.corruption,
            epoch=self.epoch,
            context_ids=self.context_ids,
            epochs=epochs or [],
            policy_changes=policy_changes or [],
            final_survivors=np.asarray(survivors if survivors is not None else [], dtype=np.int64),
        )


def _adversary(env: EnvironmentSpec) -> CorruptionAdversary | None:
    return CorruptionAdversary(env.adversary, env.theta_star) if env.adversary is not None else None


def reduce_known_dist(
    env: EnvironmentSpec,
    dist: ContextDistribution,
    net: ParameterNet,
    solver_factory: SolverFactory,
    horizon: int,
    streams: RunStreams,
    seed: int = 0,
    algorithm: str = "known-dist",
) -> RegretTrace:
    """Known-distribution reduction.

    The solver sees the fixed arms g(theta) for theta in the net. Its proposal
    theta_t is played as argmax_{a in A_t} <a, theta_t> and the reward is fed
    back as if g(theta_t) had been pulled.
    """
    arms = exact_g_many(dist, net.points)
    solver = solver_factory(arms, None)
    adversary = _adversary(env)
    recorder = TraceRecorder(env, dist, net, horizon)

    for t in range(1, horizon + 1):
        context, context_id = sample_context_indexed(dist, streams.contexts)
        index = solver.propose()
        action = context.argmax(net.points[index])
        outcome = play(env, context, action, streams.noise, adversary)
        solver.observe(index, outcome.observed_reward)
        recorder.record(t, index, outcome, 1, context_id)

    return recorder.finish(algorithm, seed, survivors=solver.survivors)


def run_epoch_reduction(
    env: EnvironmentSpec,
    dist: ContextDistribution,
    net: ParameterNet,
    schedule: EpochSchedule,
    conf: ConfidenceSchedule,
    delta: float,
    streams: RunStreams,
    seed: int = 0,
    solver_factory: SolverFactory | None = None,
    algorithm: str = "epoch",
) -> RegretTrace:
    """Epoch reduction with an empirical g-table.

    Epoch m hands a fresh solver the table g^(m) built from the t^(m)
    contexts seen before it, together with eps_m. The table keeps absorbing
    every context, so at the next boundary it averages all of them.
    """
    horizon = schedule.horizon
    validate_schedule(schedule, horizon)
    factory = solver_factory or pe_factory(conf, horizon, delta, len(net))

    table = new_empirical_table(net)
    exact = exact_g_many(dist, net.points)
    adversary = _adversary(env)
    recorder = TraceRecorder(env, dist, net, horizon)
    epochs: list[EpochRecord] = []
    solver = None

    for m in range(1, schedule.n_epochs + 1):
        arms = table.snapshot()
        eps_m = float(schedule.epsilons[m - 1])
        eps_realized = float(np.max(np.abs((arms - exact) @ env.theta_star)))
        solver = factory(arms, eps_m)
        start, end = schedule.epoch_range(m)

        for t in range(start, end + 1):
            context, context_id = sample_context_indexed(dist, streams.contexts)
            index = solver.propose()
            action = context.argmax(net.points[index])
            outcome = play(env, context, action, streams.noise, adversary)
            solver.observe(index, outcome.observed_reward)
            recorder.record(t, index, outcome, m, context_id)
            empirical_g_update(table, context)

        gamma = float(getattr(solver, "last_width", np.nan))
        record = EpochRecord(m, start, end, eps_m, eps_realized, gamma, int(solver.survivors.size))
        epochs.append(record)
        logger.debug(
            f"Epoch {m}: rounds {start}-{end}, eps={eps_m:.4g}, eps'={eps_realized:.4g}, "
            f"survivors={record.survivors}"
        )

    survivors = solver.survivors if solver is not None else None
    return recorder.finish(algorithm, seed, epochs=epochs, survivors=survivors)


def run_product_reduction(
    env: EnvironmentSpec,
    dist: ContextDistribution,
    net: ParameterNet,
    solver_factory: SolverFactory,
    horizon: int,
    streams: RunStreams,
    seed: int = 0,
    algorithm: str = "product",
) -> RegretTrace:
    """Product-context reduction to a 2d-dimensional linear bandit.

    The solver works on lifted arms a'(theta); the physical action takes the
    coordinate max where a'_{2i} = 1 and the min otherwise.
    """
    product_reduction(dist, env.theta_star)  # validates the distribution kind
    arms = product_arm_set(net)
    solver = solver_factory(arms, None)
    adversary = _adversary(env)
    recorder = TraceRecorder(env, dist, net, horizon)

    for t in range(1, horizon + 1):
        context, context_id = sample_context_indexed(dist, streams.contexts)
        index = solver.propose()
        action = product_physical_action(context, arms[index])
        outcome = play(env, context, action, streams.noise, adversary)
        solver.observe(index, outcome.observed_reward)
        recorder.record(t, index, outcome, 1, context_id)

    return recorder.finish(algorithm, seed, survivors=solver.survivors)


def _batch_plan(
    vectors: np.ndarray, survivors: np.ndarray, length: int
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Queue of net indices for one batch, the design support and whether it is informative."""
    _, first = np.unique(vectors[survivors], axis=0, return_index=True)
    representatives = survivors[np.sort(first)]
    try:
        design = g_optimal_design(vectors[representatives])
    except DegenerateActions:
        return np.resize(survivors, length), survivors, False

    if design.support.shape[0] > length:
        raise BatchTooShort(
            f"batch of {length} rounds is shorter than the design support ({design.support.shape[0]})"
        )
    # pulls sum to exactly `length`, one or more per support point
    design = allocate_to_length(design, length)
    support = representatives[design.support_indices]
    queue = np.repeat(support, design.allocations)
    return queue, support, True


def run_batched(
    env: EnvironmentSpec,
    dist: ContextDistribution,
    net: ParameterNet,
    batches: int,
    delta: float,
    streams: RunStreams,
    horizon: int,
    seed: int = 0,
    algorithm: str = "batched",
) -> RegretTrace:
    """Batched elimination: the policy only changes at the precomputed batch boundaries.

    Batch 1 cycles the net on the all-zero table. Every later batch plays
    the G-optimal allocation over the surviving g^(m)-vectors, then eliminates
    with gamma_m = 10 sqrt(d / T_{m-1} * log(M |net| / delta)).
    """
    schedule = batched_schedule(horizon, batches)
    conf = ConfidenceSchedule(ConfidenceVariant.BATCHED, batches=batches)
    table = new_empirical_table(net)
    adversary = _adversary(env)
    recorder = TraceRecorder(env, dist, net, horizon)
    survivors = np.arange(len(net))
    lengths = schedule.lengths
    epochs: list[EpochRecord] = []
    policy_changes: list[int] = []

    for m in range(1, schedule.n_epochs + 1):
        start, end = schedule.epoch_range(m)
        length = int(lengths[m - 1])
        vectors = table.snapshot()
        if m == 1:
            queue, support, informative = np.resize(survivors, length), survivors, False
        else:
            queue, support, informative = _batch_plan(vectors, survivors, length)
        policy_changes.append(start)

        slot = {int(k): i for i, k in enumerate(support)}
        counts = np.zeros(len(support))
        sums = np.zeros(len(support))
        for offset, t in enumerate(range(start, end + 1)):
            index = int(queue[offset])
            context, context_id = sample_context_indexed(dist, streams.contexts)
            action = context.argmax(net.points[index])
            outcome = play(env, context, action, streams.noise, adversary)
            counts[slot[index]] += 1
            sums[slot[index]] += outcome.observed_reward
            recorder.record(t, index, outcome, m, context_id)
            empirical_g_update(table, context)

        gamma = np.inf
        if informative:
            estimate = least_squares_from_sums(vectors[support], counts, sums)
            previous = int(lengths[m - 2])
            gamma = confidence_gamma(conf, m, previous, previous, net.ambient_dim, len(net), delta, horizon)
            values = vectors[survivors] @ estimate.theta_hat
            survivors = survivors[values.max() - values <= gamma]

        eps_realized = float(np.max(np.abs(vectors @ env.theta_star - recorder.net_values)))
        epochs.append(EpochRecord(m, start, end, 0.0, eps_realized, float(gamma), int(survivors.size)))
        logger.debug(f"Batch {m}: rounds {start}-{end}, gamma={gamma:.4g}, survivors={survivors.size}")

    return recorder.finish(
        algorithm, seed, epochs=epochs, policy_changes=policy_changes, survivors=survivors
    )

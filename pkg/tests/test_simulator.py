"""Reward simulation, noise models and the budgeted adversary."""

import dataclasses

import numpy as np
import pytest

from contextual_reduction.models.environment import (
    ActionSet,
    AdversarySpec,
    AdversaryStrategy,
    EnvironmentSpec,
    Misspecification,
    NoiseKind,
    ProductActionSet,
)
from contextual_reduction.models.errors import ActionNotInContext
from contextual_reduction.services.simulator import CorruptionAdversary, RunStreams, draw_noise, play

PAIR = ActionSet(np.array([[1.0], [-1.0]]))


def _noiseless(theta, **kw) -> EnvironmentSpec:
    return EnvironmentSpec(theta_star=np.asarray(theta, dtype=float), noise=NoiseKind.NONE, **kw)


class TestPlay:
    def test_optimal_pull(self, rng):
        outcome = play(_noiseless([1.0]), PAIR, np.array([1.0]), rng)
        assert outcome.observed_reward == 1.0
        assert outcome.instantaneous_regret == 0.0

    def test_suboptimal_pull(self, rng):
        outcome = play(_noiseless([1.0]), PAIR, np.array([-1.0]), rng)
        assert outcome.observed_reward == -1.0
        assert outcome.instantaneous_regret == 2.0

    def test_action_outside_context(self, rng):
        with pytest.raises(ActionNotInContext):
            play(_noiseless([1.0]), PAIR, np.array([0.5]), rng)

    def test_product_context_membership(self, rng):
        context = ProductActionSet((np.array([-1.0, 0.0]), np.array([0.0, 0.5])))
        env = _noiseless([0.6, 0.8])
        outcome = play(env, context, np.array([0.0, 0.5]), rng)
        assert outcome.clean_mean == pytest.approx(0.4)
        assert outcome.optimal_value == pytest.approx(0.4)
        with pytest.raises(ActionNotInContext):
            play(env, context, np.array([0.5, 0.5]), rng)

    def test_misspecification_table(self, rng):
        misspec = Misspecification(0.1, table={(1.0,): -0.1})
        outcome = play(_noiseless([0.5], misspec=misspec), PAIR, np.array([1.0]), rng)
        assert outcome.misspecification == -0.1
        assert outcome.observed_reward == pytest.approx(0.4)
        # regret is measured on the linear part only
        assert outcome.instantaneous_regret == 0.0

    def test_misspecification_direction_is_bounded(self):
        misspec = Misspecification(0.2, direction=np.array([1.0, 0.0]))
        for a in np.linspace(-1, 1, 11):
            assert abs(misspec.value(np.array([a, 0.0]))) <= 0.2

    def test_misspecification_table_over_epsilon(self):
        with pytest.raises(ValueError):
            Misspecification(0.1, table={(1.0,): 0.2})

    def test_reward_decomposition(self):
        env = EnvironmentSpec(theta_star=np.array([0.5]), noise=NoiseKind.GAUSSIAN)
        outcome = play(env, PAIR, np.array([-1.0]), np.random.default_rng(5))
        assert outcome.observed_reward == pytest.approx(outcome.clean_mean + outcome.noise)


class TestNoise:
    @pytest.mark.parametrize("kind", [NoiseKind.GAUSSIAN, NoiseKind.BOUNDED_UNIFORM, NoiseKind.RADEMACHER])
    def test_mean_zero(self, kind):
        rng = np.random.default_rng(11)
        draws = np.array([draw_noise(kind, rng) for _ in range(20_000)])
        assert abs(draws.mean()) < 0.05

    def test_bounded_kinds(self):
        rng = np.random.default_rng(2)
        uniform = [draw_noise(NoiseKind.BOUNDED_UNIFORM, rng) for _ in range(1000)]
        signs = {draw_noise(NoiseKind.RADEMACHER, rng) for _ in range(1000)}
        assert max(abs(x) for x in uniform) <= 1.0
        assert signs == {-1.0, 1.0}

    def test_none(self, rng):
        assert draw_noise(NoiseKind.NONE, rng) == 0.0


class TestCorruptionAdversary:
    def test_flip_optimal_budget_trace(self, rng):
        spec = AdversarySpec(AdversaryStrategy.FLIP_OPTIMAL, budget=5.0)
        env = _noiseless([1.0], adversary=spec)
        adversary = CorruptionAdversary(spec, env.theta_star)

        observed, applied, spent = [], [], []
        for _ in range(5):
            outcome = play(env, PAIR, np.array([1.0]), rng, adversary)
            observed.append(outcome.observed_reward)
            applied.append(outcome.corruption_applied)
            spent.append(adversary.spent)

        assert observed == [-1.0, -1.0, 0.0, 1.0, 1.0]
        assert applied == [-2.0, -2.0, -1.0, 0.0, 0.0]
        assert spent == [2.0, 4.0, 5.0, 5.0, 5.0]
        assert adversary.ledger == [2.0, 2.0, 1.0, 0.0, 0.0]
        assert adversary.remaining == 0.0

    def test_spends_budget_even_when_action_is_not_targeted(self, rng):
        spec = AdversarySpec(AdversaryStrategy.FLIP_OPTIMAL, budget=3.0)
        env = _noiseless([1.0], adversary=spec)
        adversary = CorruptionAdversary(spec, env.theta_star)
        outcome = play(env, PAIR, np.array([-1.0]), rng, adversary)
        assert outcome.corruption_applied == 0.0
        assert adversary.spent == 2.0

    def test_constant_bias_on_target(self, rng):
        target = np.array([-1.0])
        spec = AdversarySpec(AdversaryStrategy.CONSTANT_BIAS, budget=1.5, bias=1.0, target=target)
        env = _noiseless([1.0], adversary=spec)
        adversary = CorruptionAdversary(spec, env.theta_star)
        applied = [play(env, PAIR, target, rng, adversary).corruption_applied for _ in range(3)]
        assert applied == [-1.0, -0.5, 0.0]
        assert sum(adversary.ledger) <= spec.budget

    def test_constant_bias_needs_target(self):
        with pytest.raises(ValueError):
            AdversarySpec(AdversaryStrategy.CONSTANT_BIAS, budget=1.0)

    def test_zero_budget_never_corrupts(self, rng):
        spec = AdversarySpec(AdversaryStrategy.FLIP_OPTIMAL, budget=0.0)
        adversary = CorruptionAdversary(spec, np.array([1.0]))
        assert adversary.decide(PAIR).magnitude == 0.0
        assert adversary.ledger == [0.0]


class TestRunStreams:
    def test_same_seed_same_streams(self):
        a, b = RunStreams.from_seed(9), RunStreams.from_seed(9)
        assert a.contexts.random() == b.contexts.random()
        assert a.noise.random() == b.noise.random()

    def test_streams_are_independent(self):
        streams = RunStreams.from_seed(9)
        assert streams.contexts.random() != streams.noise.random()

    def test_three_streams(self):
        streams = RunStreams.from_seed(9)
        assert [f.name for f in dataclasses.fields(streams)] == ["contexts", "noise", "algorithm"]

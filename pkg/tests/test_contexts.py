"""Context distributions, sampling and per-round optimal values."""

import numpy as np
import pytest

from contextual_reduction.models.environment import (
    ActionSet,
    ContextDistribution,
    CoordinateDistribution,
    ProductActionSet,
)
from contextual_reduction.services.contexts import optimal_round_value, sample_context, sample_context_indexed
from contextual_reduction.services.suites import example1_distribution


class TestContextDistribution:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum to"):
            ContextDistribution.finite([ActionSet(np.array([[1.0]]))], [0.5])

    def test_negative_probability(self):
        sets = [ActionSet(np.array([[1.0]])), ActionSet(np.array([[0.5]]))]
        with pytest.raises(ValueError, match="nonnegative"):
            ContextDistribution.finite(sets, [1.5, -0.5])

    def test_mixed_dimensions(self):
        sets = [ActionSet(np.array([[1.0]])), ActionSet(np.array([[0.5, 0.5]]))]
        with pytest.raises(ValueError, match="dimension"):
            ContextDistribution.finite(sets, [0.5, 0.5])

    def test_product_must_stay_in_ball(self):
        coordinate = CoordinateDistribution((np.array([-1.0, 1.0]),), np.array([1.0]))
        with pytest.raises(ValueError, match="unit ball"):
            ContextDistribution.product([coordinate, coordinate])

    def test_action_outside_ball(self):
        with pytest.raises(ValueError):
            ActionSet(np.array([[1.0, 1.0]]))


class TestSampleContext:
    def test_example1_frequencies(self):
        rng = np.random.default_rng(0)
        dist = example1_distribution()
        draws = [sample_context_indexed(dist, rng)[1] for _ in range(100_000)]
        assert np.mean(np.asarray(draws) == 0) == pytest.approx(0.5, abs=0.01)

    def test_point_mass(self, rng):
        only = ActionSet(np.array([[0.6, 0.0], [0.0, 0.6]]))
        dist = ContextDistribution.finite([only], [1.0])
        for _ in range(20):
            context, index = sample_context_indexed(dist, rng)
            assert context is only
            assert index == 0

    def test_product_expected_max(self):
        rng = np.random.default_rng(1)
        coordinate = CoordinateDistribution(
            (np.array([-1.0, 0.0]), np.array([-1.0, 1.0])), np.array([0.5, 0.5])
        )
        dist = ContextDistribution.product([coordinate])
        maxes = []
        for _ in range(100_000):
            context, index = sample_context_indexed(dist, rng)
            assert index == -1
            maxes.append(context.maxes[0])
        assert np.mean(maxes) == pytest.approx(0.5, abs=0.01)
        assert coordinate.expected_max == pytest.approx(0.5)

    def test_same_seed_same_draws(self):
        dist = example1_distribution()
        a = [len(sample_context(dist, np.random.default_rng(3))) for _ in range(5)]
        b = [len(sample_context(dist, np.random.default_rng(3))) for _ in range(5)]
        assert a == b


class TestOptimalRoundValue:
    def test_finite_context(self):
        context = ActionSet(np.array([[1.0], [-1.0]]))
        assert optimal_round_value(context, np.array([0.3])) == pytest.approx(0.3)

    def test_product_context_decomposes(self):
        context = ProductActionSet((np.array([-1.0, 1.0]), np.array([-1.0, 1.0])))
        assert optimal_round_value(context, np.array([0.6, -0.8])) == pytest.approx(1.4)

    def test_matches_linear_scan(self, rng):
        actions = rng.standard_normal((50, 4))
        actions /= np.linalg.norm(actions, axis=1, keepdims=True)
        theta = rng.standard_normal(4)
        theta /= np.linalg.norm(theta)
        expected = max(float(a @ theta) for a in actions)
        assert optimal_round_value(ActionSet(actions), theta) == pytest.approx(expected, abs=1e-12)

    def test_product_zero_coordinate_takes_max(self):
        context = ProductActionSet((np.array([-0.5, 0.25]),))
        np.testing.assert_array_equal(context.argmax(np.array([0.0])), [0.25])

import math

import numpy as np
import pytest

from contextual_reduction.models.errors import InsufficientGrid
from contextual_reduction.services.scaling import envelope_rate, scaling_fit_values

HORIZONS = (1024, 2048, 4096, 8192, 16384)


class TestScalingFit:
    def test_square_root_rate(self):
        report = scaling_fit_values({T: [7 * math.sqrt(T)] * 3 for T in HORIZONS}, dim=3)
        assert report.alpha == pytest.approx(0.5, abs=1e-6)
        assert report.intercept == pytest.approx(math.log(7), abs=1e-6)
        np.testing.assert_allclose(report.residuals, 0.0, atol=1e-9)
        assert report.within_envelope

    def test_linear_rate_leaves_the_envelope(self):
        report = scaling_fit_values({T: [0.3 * T] * 3 for T in HORIZONS}, dim=2)
        assert report.alpha == pytest.approx(1.0, abs=1e-6)
        assert not report.within_envelope
        assert not report.rows[0].exceeds
        assert report.rows[-1].exceeds

    def test_rows_summarize_each_horizon(self):
        groups = {T: [1.0 * T**0.5, 2.0 * T**0.5, 3.0 * T**0.5] for T in HORIZONS[:4]}
        report = scaling_fit_values(groups, dim=1)
        first = report.rows[0]
        assert first.horizon == 1024
        assert first.runs == 3
        assert first.mean == pytest.approx(64.0)
        assert first.std == pytest.approx(32.0)  # sample std of 32, 64, 96
        assert first.envelope == pytest.approx(report.constant * envelope_rate(1, 1024))

    def test_envelope_calibrated_at_smallest_horizon(self):
        report = scaling_fit_values({T: [math.sqrt(T)] * 3 for T in HORIZONS}, dim=2)
        assert report.rows[0].envelope == pytest.approx(report.rows[0].mean)

    @pytest.mark.parametrize(
        "groups",
        [
            {T: [1.0, 2.0, 3.0] for T in HORIZONS[:3]},
            {**{T: [1.0, 2.0, 3.0] for T in HORIZONS[:3]}, 8192: [1.0, 2.0]},
            {T: [0.0, 0.0, 0.0] for T in HORIZONS},
            {1: [1.0] * 3, 2: [1.0] * 3, 4: [1.0] * 3, 8: [1.0] * 3},
        ],
        ids=["few-horizons", "few-runs", "zero-regret", "horizon-one"],
    )
    def test_insufficient_grid(self, groups):
        with pytest.raises(InsufficientGrid):
            scaling_fit_values(groups, dim=1)


def test_envelope_rate():
    assert envelope_rate(3, 1024) == pytest.approx(3 * math.sqrt(1024 * math.log(1024)))

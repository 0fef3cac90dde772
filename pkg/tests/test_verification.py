import pytest

from contextual_reduction.services.verification import CHECKS, Scale, run_verification


def test_ten_numbered_checks():
    assert sorted(CHECKS) == list(range(1, 11))


def test_quick_scale_is_smaller():
    full, quick = Scale.full(), Scale.quick()
    assert max(quick.rate_horizons) < max(full.rate_horizons)
    assert quick.batched_horizon < full.batched_horizon


@pytest.mark.parametrize("number", [4, 5, 6])
def test_exact_checks_pass(number):
    [result] = run_verification(quick=True, only=[number])
    assert result.number == number
    assert result.name == CHECKS[number][0]
    assert result.passed, result.detail


@pytest.mark.slow
@pytest.mark.parametrize("number", [7, 10])
def test_stable_statistical_checks_pass(number):
    [result] = run_verification(quick=True, only=[number])
    assert result.number == number
    assert result.passed, result.detail


@pytest.mark.slow
@pytest.mark.parametrize("number", [1, 2, 3])
def test_statistical_checks_complete(number):
    [result] = run_verification(quick=True, only=[number])
    assert result.number == number
    assert result.name == CHECKS[number][0]
    assert result.detail
    assert result.elapsed_s >= 0


@pytest.mark.slow
def test_corruption_check_reports_both_arms():
    [result] = run_verification(quick=True, only=[8])
    assert "corruption-aware keeps optimum" in result.detail
    assert "plain loses it" in result.detail


@pytest.mark.slow
def test_sparse_check_names_its_dense_proxy():
    [result] = run_verification(quick=True, only=[9])
    assert "width proxy" in result.detail

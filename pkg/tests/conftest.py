"""Shared fixtures."""

import numpy as np
import pytest

from contextual_reduction.services.suite_store import reset_suite_store


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _isolated_suite_store(monkeypatch):
    """Every test starts with the built-in suites only."""
    monkeypatch.delenv("CONTEXTUAL_REDUCTION_SUITES", raising=False)
    monkeypatch.delenv("CONTEXTUAL_REDUCTION_WORKERS", raising=False)
    reset_suite_store()
    yield
    reset_suite_store()

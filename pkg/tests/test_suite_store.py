"""Preset suites read from a JSON file."""

import json

import numpy as np
import pytest

from contextual_reduction.models.environment import NoiseKind
from contextual_reduction.models.errors import UnknownSuiteName
from contextual_reduction.services.suite_store import SuiteStore, get_suite_store, reset_suite_store
from contextual_reduction.services.suites import STANDARD_SUITES, SuiteSpec


@pytest.fixture
def suites_file(tmp_path, monkeypatch):
    def write(data):
        path = tmp_path / "suites.json"
        path.write_text(json.dumps(data))
        monkeypatch.setenv("CONTEXTUAL_REDUCTION_SUITES", str(path))
        reset_suite_store()
        return path

    return write


class TestSuiteStore:
    def test_standard_names_without_presets(self):
        store = get_suite_store()
        assert store.names() == list(STANDARD_SUITES)

    def test_resolve_standard(self):
        dist, env = SuiteStore().resolve("random-finite", 4, 1)
        assert env.dim == 4

    def test_unknown_name(self):
        with pytest.raises(UnknownSuiteName):
            SuiteStore().resolve("missing", 3, 0)

    def test_preset_carries_its_own_dim_and_seed(self):
        store = SuiteStore([SuiteSpec(name="wide", base="random-finite", dim=6, seed=3)])
        _, env = store.resolve("wide", 2, 99)
        _, again = store.resolve("wide", 5, 0)
        assert env.dim == 6
        np.testing.assert_array_equal(env.theta_star, again.theta_star)

    def test_shadowing_warns(self, caplog):
        SuiteStore([SuiteSpec(name="product", base="product", dim=2)])
        assert "shadows" in caplog.text


class TestPresetFile:
    def test_list_form(self, suites_file):
        suites_file([{"name": "quiet", "base": "random-finite", "dim": 2, "noise": "none"}])
        store = get_suite_store()
        assert "quiet" in store.names()
        assert store.get("quiet").noise == NoiseKind.NONE

    def test_object_form(self, suites_file):
        suites_file({"suites": [{"name": "tiny", "base": "sparse", "dim": 5, "sparsity": 1}]})
        _, env = get_suite_store().resolve("tiny", 3, 0)
        assert np.count_nonzero(env.theta_star) == 1

    def test_invalid_entries_are_skipped(self, suites_file, caplog):
        suites_file(
            [
                {"name": "no-base"},
                {"name": "bad-base", "base": "nope"},
                {"name": "bad-noise", "base": "product", "noise": "loud"},
                {"name": "ok", "base": "product", "dim": 2},
            ]
        )
        store = get_suite_store()
        assert store.get("ok") is not None
        for name in ("no-base", "bad-base", "bad-noise"):
            assert store.get(name) is None
        assert caplog.text.count("Skipping invalid suite") == 3

    def test_missing_file(self, tmp_path, monkeypatch, caplog):
        monkeypatch.setenv("CONTEXTUAL_REDUCTION_SUITES", str(tmp_path / "none.json"))
        reset_suite_store()
        assert get_suite_store().names() == list(STANDARD_SUITES)
        assert "not found" in caplog.text

    def test_invalid_json(self, tmp_path, monkeypatch, caplog):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        monkeypatch.setenv("CONTEXTUAL_REDUCTION_SUITES", str(path))
        reset_suite_store()
        assert get_suite_store().names() == list(STANDARD_SUITES)
        assert "Invalid JSON" in caplog.text

    def test_singleton(self):
        assert get_suite_store() is get_suite_store()

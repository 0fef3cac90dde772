"""Seeded execution of run configurations."""

import dataclasses
import json

import numpy as np
import pytest

from contextual_reduction.models.environment import NoiseKind
from contextual_reduction.models.errors import RunFailed
from contextual_reduction.models.reduction import ConfidenceVariant
from contextual_reduction.models.run import Algorithm, NetSource, NetSpec, RegretTrace, RunConfig, RunFailure
from contextual_reduction.services.runner import (
    build_net,
    confidence_for,
    execute_seed,
    nominal_dense_net_size,
    resolve_instance,
    run,
    run_outcomes,
)
from contextual_reduction.services.schedules import batched_schedule
from contextual_reduction.services.suite_store import reset_suite_store


def _config(**kw) -> RunConfig:
    defaults = dict(suite="random-finite", algorithm=Algorithm.KNOWN_DIST, dim=2, horizon=120, net=NetSpec(resolution=0.5))
    defaults.update(kw)
    return RunConfig(**defaults)


class TestRun:
    def test_one_trace_per_seed(self):
        traces = run(_config(suite="example1", dim=1, seeds=(0, 1, 2)))
        assert [t.seed for t in traces] == [0, 1, 2]
        assert all(t.horizon == 120 for t in traces)

    def test_identical_on_repeat(self):
        config = _config(suite="example1", dim=1, seeds=(0, 1, 2))
        first, second = run(config), run(config)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.reward, b.reward)
            np.testing.assert_array_equal(a.proposals, b.proposals)

    def test_parallel_matches_serial(self):
        serial = run(_config(seeds=(0, 1), workers=1))
        parallel = run(_config(seeds=(0, 1), workers=2))
        for a, b in zip(serial, parallel):
            np.testing.assert_array_equal(a.reward, b.reward)

    def test_failures_name_every_seed(self):
        config = _config(algorithm=Algorithm.PRODUCT, seeds=(3, 4))
        outcomes = run_outcomes(config)
        assert all(isinstance(o, RunFailure) for o in outcomes)
        assert [o.code for o in outcomes] == ["NOT_PRODUCT", "NOT_PRODUCT"]
        with pytest.raises(RunFailed) as excinfo:
            run(config)
        assert [f.seed for f in excinfo.value.failures] == [3, 4]

    def test_random_baseline_is_dominated(self):
        base = _config(suite="example1", dim=1, horizon=2000, seeds=(0, 1, 2))
        reduction = np.mean([t.final_regret for t in run(base)])
        baseline = np.mean([t.final_regret for t in run(dataclasses.replace(base, algorithm=Algorithm.RANDOM_BASELINE))])
        assert baseline >= reduction


class TestDispatch:
    def test_epoch_uses_doubling_schedule(self):
        trace = execute_seed(_config(algorithm=Algorithm.EPOCH, horizon=64), 0)
        assert trace.algorithm == "epoch"
        assert [r.start for r in trace.epochs] == [1, 2, 3, 5, 9, 17, 33]

    def test_batched(self):
        trace = execute_seed(_config(algorithm=Algorithm.BATCHED, horizon=1024, batches=4), 0)
        schedule = batched_schedule(1024, 4)
        assert trace.policy_changes == [int(b) + 1 for b in schedule.boundaries[:-1]]

    def test_product_suite_routes_through_product_reduction(self):
        for algorithm in (Algorithm.KNOWN_DIST, Algorithm.EPOCH, Algorithm.PRODUCT, Algorithm.RANDOM_BASELINE):
            trace = execute_seed(_config(suite="product", algorithm=algorithm), 0)
            assert trace.algorithm == algorithm.value
            np.testing.assert_array_equal(trace.context_ids, -1)

    def test_sparse_variant(self):
        config = _config(
            suite="sparse",
            algorithm=Algorithm.PE_SPARSE,
            dim=6,
            sparsity=2,
            net=NetSpec(NetSource.SPARSE, 0.5, sparsity=2),
        )
        trace = execute_seed(config, 0)
        assert trace.algorithm == "pe-sparse"

    def test_structured_variant(self):
        config = _config(
            suite="structured",
            algorithm=Algorithm.PE_STRUCTURED,
            dim=4,
            net=NetSpec(NetSource.STRUCTURED, 0.5, latent_dim=2),
        )
        trace = execute_seed(config, 0)
        assert trace.algorithm == "pe-structured"
        assert confidence_for(config, resolve_instance(config)[1]).sparsity == 2

    def test_pe_variant_runs_the_epoch_reduction(self):
        config = _config(suite="corrupt", algorithm=Algorithm.PE_CORRUPT, dim=3, horizon=64)
        trace = execute_seed(config, 0)
        assert trace.algorithm == "pe-corrupt"
        assert [r.start for r in trace.epochs] == [1, 2, 3, 5, 9, 17, 33]
        assert trace.epochs[0].epsilon == 1.0
        for record in trace.epochs:
            assert np.isfinite(record.epsilon) and record.epsilon > 0
            assert np.isfinite(record.epsilon_realized) and record.epsilon_realized >= 0
        assert trace.epochs[-1].epsilon < trace.epochs[1].epsilon

    def test_known_distribution_keeps_the_exact_table(self):
        config = _config(suite="corrupt", algorithm=Algorithm.PE_CORRUPT, dim=3, horizon=64, known_distribution=True)
        trace = execute_seed(config, 0)
        assert trace.algorithm == "pe-corrupt"
        assert trace.epochs == []

    def test_noise_override(self):
        config = _config(noise=NoiseKind.NONE)
        _, env, _ = resolve_instance(config)
        assert env.noise == NoiseKind.NONE

    def test_file_net(self, tmp_path):
        path = tmp_path / "net.txt"
        path.write_text("dim=2 kind=user-supplied radius=0.5\n0.0 0.0\n0.6 0.0\n0.0 -0.6\n")
        config = _config(net=NetSpec(NetSource.FILE, path=str(path)))
        assert len(build_net(config, 2, 0)) == 3
        assert isinstance(execute_seed(config, 0), RegretTrace)


class TestConfidenceFor:
    def test_falls_back_to_instance_budget(self):
        config = _config(suite="corrupt", algorithm=Algorithm.PE_CORRUPT, dim=3)
        conf = confidence_for(config, resolve_instance(config)[1])
        assert conf.variant == ConfidenceVariant.CORRUPTION
        assert conf.budget == 20.0

    def test_explicit_epsilon_wins(self):
        config = _config(suite="misspec", algorithm=Algorithm.PE_MISSPEC_KNOWN, dim=3, epsilon=0.3)
        conf = confidence_for(config, resolve_instance(config)[1])
        assert conf.epsilon == 0.3

    def test_instance_epsilon(self):
        config = _config(suite="misspec", algorithm=Algorithm.PE_MISSPEC_KNOWN, dim=3)
        assert confidence_for(config, resolve_instance(config)[1]).epsilon == pytest.approx(0.1)


class TestPresets:
    def test_preset_uses_its_own_seed(self, tmp_path, monkeypatch):
        path = tmp_path / "suites.json"
        path.write_text(json.dumps([{"name": "fixed", "base": "random-finite", "dim": 2, "seed": 11}]))
        monkeypatch.setenv("CONTEXTUAL_REDUCTION_SUITES", str(path))
        reset_suite_store()
        _, env, instance_seed = resolve_instance(_config(suite="fixed", instance_seed=0))
        assert instance_seed == 11
        assert env.dim == 2


def test_nominal_dense_net_size():
    assert nominal_dense_net_size(2, 10) == 3600

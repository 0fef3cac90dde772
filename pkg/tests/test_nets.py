"""Dense, sparse and structured nets, covering radius and net files."""

import itertools

import numpy as np
import pytest

from contextual_reduction.models.errors import CapacityExceeded, IoFailure
from contextual_reduction.models.geometry import NetKind, ParameterNet
from contextual_reduction.services.nets import (
    build_dense_net,
    build_sparse_net,
    build_structured_net,
    covering_radius_estimate,
    format_net,
    load_net,
    parse_net,
    save_net,
)


def _as_set(points: np.ndarray) -> set[tuple[float, ...]]:
    return {tuple(float(x) for x in p) for p in points}


class TestParameterNet:
    def test_rejects_point_outside_ball(self):
        with pytest.raises(ValueError, match="outside the unit ball"):
            ParameterNet(points=np.array([[1.5, 0.0]]), ambient_dim=2, target_radius=0.1, kind=NetKind.USER)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ParameterNet(points=np.zeros((0, 2)), ambient_dim=2, target_radius=0.1, kind=NetKind.USER)

    def test_rejects_duplicate_points(self):
        points = np.array([[0.5, 0.0], [0.0, 0.5], [0.5, 0.0]])
        with pytest.raises(ValueError, match="duplicate"):
            ParameterNet(points=points, ambient_dim=2, target_radius=0.1, kind=NetKind.USER)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            ParameterNet(points=np.zeros((1, 3)), ambient_dim=2, target_radius=0.1, kind=NetKind.USER)

    def test_points_are_read_only(self):
        net = build_dense_net(1, 0.5)
        with pytest.raises(ValueError):
            net.points[0, 0] = 0.3

    def test_nearest_index(self):
        net = build_dense_net(1, 0.5)
        assert net.points[net.nearest_index(np.array([0.6]))][0] == 0.5


class TestDenseNet:
    def test_one_dimensional_grid(self):
        net = build_dense_net(1, 0.5)
        np.testing.assert_array_equal(np.sort(net.points[:, 0]), [-1.0, -0.5, 0.0, 0.5, 1.0])
        assert net.kind == NetKind.DENSE

    def test_unit_grid_in_plane(self):
        net = build_dense_net(2, 1.0)
        assert _as_set(net.points) == {(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)}

    def test_count_matches_brute_force_enumeration(self):
        k = np.arange(-20, 21)
        grid = np.stack(np.meshgrid(k, k, k, indexing="ij"), axis=-1).reshape(-1, 3)
        expected = int(np.count_nonzero(np.sum(grid**2, axis=1) <= 400))
        net = build_dense_net(3, 0.05)
        assert len(net) == expected

    def test_points_inside_ball_and_distinct(self):
        net = build_dense_net(3, 0.2)
        assert np.all(np.linalg.norm(net.points, axis=1) <= 1 + 1e-12)
        assert len(np.unique(net.points, axis=0)) == len(net)

    def test_target_radius(self):
        net = build_dense_net(4, 0.5)
        assert net.target_radius == pytest.approx(0.5 * 2.0)

    def test_capacity_exceeded(self):
        with pytest.raises(CapacityExceeded):
            build_dense_net(10, 0.01)

    @pytest.mark.parametrize("dim, resolution", [(0, 0.5), (2, 0.0), (2, -1.0)])
    def test_invalid_arguments(self, dim, resolution):
        with pytest.raises(ValueError):
            build_dense_net(dim, resolution)


class TestSparseNet:
    def test_one_sparse_three_dimensional(self):
        net = build_sparse_net(3, 1, 0.5)
        expected = {(0.0, 0.0, 0.0)}
        for i in range(3):
            for value in (-1.0, -0.5, 0.5, 1.0):
                point = [0.0, 0.0, 0.0]
                point[i] = value
                expected.add(tuple(point))
        assert len(net) == 13
        assert _as_set(net.points) == expected

    def test_axis_points(self):
        assert len(build_sparse_net(5, 1, 1.0)) == 11

    def test_count_matches_support_enumeration(self):
        k = np.arange(-4, 5)
        grid = np.array(list(itertools.product(k, repeat=4)))
        keep = (np.count_nonzero(grid, axis=1) <= 2) & (np.sum(grid**2, axis=1) <= 16)
        net = build_sparse_net(4, 2, 0.25)
        assert len(net) == int(np.count_nonzero(keep))
        assert len(np.unique(net.points, axis=0)) == len(net)

    def test_points_respect_sparsity(self):
        net = build_sparse_net(6, 2, 0.5)
        assert np.all(np.count_nonzero(net.points, axis=1) <= 2)
        assert net.sparsity == 2
        assert net.kind == NetKind.SPARSE

    @pytest.mark.parametrize("sparsity", [0, 4])
    def test_sparsity_out_of_range(self, sparsity):
        with pytest.raises(ValueError):
            build_sparse_net(3, sparsity, 0.5)


class TestStructuredNet:
    def test_orthonormal_embedding_keeps_every_latent_point(self):
        embedding = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        net = build_structured_net(2, embedding, 0.5)
        assert len(net) == 13
        assert net.ambient_dim == 3
        assert net.kind == NetKind.STRUCTURED
        np.testing.assert_array_equal(net.points[:, 2], 0.0)

    def test_callable_embedding_projects_and_dedupes(self):
        net = build_structured_net(1, lambda phi: 2.0 * phi, 0.5)
        np.testing.assert_array_equal(net.points[:, 0], [-1.0, 0.0, 1.0])

    def test_target_radius_scales_with_lipschitz(self):
        net = build_structured_net(2, np.eye(2), 0.25, lipschitz=3.0)
        assert net.target_radius == pytest.approx(3.0 * 0.25 * np.sqrt(2))


class TestCoveringRadius:
    def test_one_dimensional_midpoint_bound(self):
        net = build_dense_net(1, 0.5)
        assert covering_radius_estimate(net, 1000) <= 0.25 + 1e-12

    def test_single_point_net(self):
        net = ParameterNet(points=np.zeros((1, 2)), ambient_dim=2, target_radius=1.0, kind=NetKind.USER)
        estimate = covering_radius_estimate(net, 1000)
        assert 0.5 <= estimate <= 1.0

    def test_grid_diagonal_bound(self):
        net = build_dense_net(2, 0.25)
        assert covering_radius_estimate(net, 2000) <= 0.25 * np.sqrt(2)

    def test_sparse_net_probed_in_subspace(self):
        net = build_sparse_net(8, 1, 0.25)
        assert covering_radius_estimate(net, 500) <= 0.25 + 1e-12

    def test_deterministic_for_fixed_seed(self):
        net = build_dense_net(2, 0.5)
        assert covering_radius_estimate(net, 300, rng_seed=4) == covering_radius_estimate(net, 300, rng_seed=4)

    def test_requires_samples(self):
        with pytest.raises(ValueError):
            covering_radius_estimate(build_dense_net(1, 0.5), 0)


class TestNetText:
    def test_header(self):
        header = format_net(build_sparse_net(3, 1, 0.5)).splitlines()[0]
        assert header.startswith("dim=3 kind=sparse radius=")
        assert header.endswith("sparsity=1")

    def test_parse_back_is_exact(self):
        net = build_dense_net(2, 0.3)
        parsed = parse_net(format_net(net))
        np.testing.assert_array_equal(parsed.points, net.points)
        assert parsed.kind == NetKind.DENSE
        assert parsed.target_radius == net.target_radius

    def test_duplicate_points_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            parse_net("dim=1 kind=user-supplied radius=0.5\n0.5\n0.5\n")

    def test_headerless_defaults(self):
        net = parse_net("dim=2\n0.0 0.0\n0.5 0.5\n")
        assert net.kind == NetKind.USER
        assert len(net) == 2

    def test_save_and_load(self, tmp_path):
        net = build_sparse_net(4, 2, 0.5)
        path = tmp_path / "net.txt"
        save_net(net, path)
        loaded = load_net(path)
        np.testing.assert_array_equal(loaded.points, net.points)
        assert loaded.sparsity == 2

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_net(tmp_path / "missing.txt")

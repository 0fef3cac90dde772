"""The expected-greedy-action map g, exact and empirical."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..models.environment import Context, ContextDistribution
from ..models.errors import IoFailure, NotFiniteSupport, NotProduct
from ..models.geometry import NetKind, ParameterNet
from ..models.reduction import GMode, GTable, ProductReduction
from .nets import format_number, parse_header

logger = logging.getLogger(__name__)


def _require_finite(dist: ContextDistribution) -> None:
    if not dist.is_finite:
        raise NotFiniteSupport("exact g needs a finite-support distribution; use exact_g_product")


def _require_product(dist: ContextDistribution) -> None:
    if dist.is_finite:
        raise NotProduct("operation needs a product-structured distribution")


def _expected_extremes(dist: ContextDistribution) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.array([c.expected_max for c in dist.coordinates]),
        np.array([c.expected_min for c in dist.coordinates]),
    )


def exact_g(dist: ContextDistribution, theta: np.ndarray) -> np.ndarray:
    """g(theta) = sum_A p(A) argmax_{a in A} <a, theta>."""
    _require_finite(dist)
    theta = np.asarray(theta, dtype=float)
    return sum(p * s.argmax(theta) for p, s in zip(dist.probabilities, dist.supports))  # type: ignore[return-value]


def exact_g_product(dist: ContextDistribution, theta: np.ndarray) -> np.ndarray:
    """Coordinate i is E[max A^(i)] when theta_i >= 0, E[min A^(i)] otherwise."""
    _require_product(dist)
    expected_max, expected_min = _expected_extremes(dist)
    return np.where(np.asarray(theta, dtype=float) >= 0, expected_max, expected_min)


def exact_g_many(dist: ContextDistribution, thetas: np.ndarray) -> np.ndarray:
    """g for every row of `thetas`, either distribution kind."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    if not dist.is_finite:
        expected_max, expected_min = _expected_extremes(dist)
        return np.where(thetas >= 0, expected_max, expected_min)
    vectors = np.zeros_like(thetas)
    for p, support in zip(dist.probabilities, dist.supports):
        vectors += p * support.argmax_many(thetas)
    return vectors


def exact_g_table(dist: ContextDistribution, net: ParameterNet) -> GTable:
    vectors = exact_g_many(dist, net.points)
    return GTable(net=net, vectors=vectors, counts=np.zeros(len(net), dtype=np.int64), mode=GMode.EXACT)


def new_empirical_table(net: ParameterNet) -> GTable:
    """Empirical table initialised to zero vectors."""
    return GTable(
        net=net,
        vectors=np.zeros((len(net), net.ambient_dim)),
        counts=np.zeros(len(net), dtype=np.int64),
        mode=GMode.EMPIRICAL,
    )


def empirical_g_update(table: GTable, context: Context) -> None:
    """Fold one observed context into every running mean."""
    if table.mode != GMode.EMPIRICAL:
        raise ValueError("empirical_g_update needs an empirical table")
    greedy = context.argmax_many(table.net.points)
    table.counts += 1
    table.vectors += (greedy - table.vectors) / table.counts[:, None]


def product_reduction(dist: ContextDistribution, theta_star: np.ndarray) -> ProductReduction:
    """Lift parameters for the product reduction; theta'* interleaves E[max]theta* and E[min]theta*."""
    _require_product(dist)
    expected_max, expected_min = _expected_extremes(dist)
    theta_star = np.asarray(theta_star, dtype=float)
    theta_prime = np.empty(2 * theta_star.size)
    theta_prime[0::2] = expected_max * theta_star
    theta_prime[1::2] = expected_min * theta_star
    return ProductReduction(expected_max, expected_min, theta_prime)


def product_arm_set(net: ParameterNet) -> np.ndarray:
    """Lifted arm a'(theta) for every net point, shape (n, 2d)."""
    takes_max = net.points >= 0
    lifted = np.zeros((len(net), 2 * net.ambient_dim))
    lifted[:, 0::2] = takes_max
    lifted[:, 1::2] = ~takes_max
    return lifted


def product_physical_action(context: Context, lifted: np.ndarray) -> np.ndarray:
    """Coordinate i is max A^(i) when lifted[2i] == 1, else min A^(i)."""
    return np.where(np.asarray(lifted)[0::2] == 1, context.maxes, context.mins)  # type: ignore[union-attr]


def format_g_table(table: GTable) -> str:
    """Net point, g-vector and count per line."""
    net = table.net
    lines = [
        f"dim={net.ambient_dim} kind={net.kind.value} "
        f"radius={format_number(net.target_radius)} mode={table.mode.value}"
    ]
    for point, vector, count in zip(net.points, table.vectors, table.counts):
        fields = [*(format_number(x) for x in point), *(format_number(x) for x in vector), str(int(count))]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_g_table(text: str) -> GTable:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty g-table file")
    header = parse_header(lines[0])
    dim = int(header["dim"])
    rows = [line.split() for line in lines[1:]]
    if any(len(row) != 2 * dim + 1 for row in rows):
        raise ValueError(f"g-table rows must have {2 * dim + 1} fields")
    values = np.array([[float(x) for x in row[: 2 * dim]] for row in rows], dtype=float)
    net = ParameterNet(
        points=values[:, :dim],
        ambient_dim=dim,
        target_radius=float(header.get("radius", "1.0")),
        kind=NetKind(header.get("kind", NetKind.USER.value)),
    )
    return GTable(
        net=net,
        vectors=values[:, dim:],
        counts=np.array([int(row[-1]) for row in rows], dtype=np.int64),
        mode=GMode(header.get("mode", GMode.EMPIRICAL.value)),
    )


def save_g_table(table: GTable, path: Path) -> None:
    try:
        path.write_text(format_g_table(table))
    except OSError as e:
        raise IoFailure(f"cannot write g-table to {path}: {e}") from e


def load_g_table(path: Path) -> GTable:
    try:
        return parse_g_table(path.read_text())
    except OSError as e:
        raise IoFailure(f"cannot read g-table {path}: {e}") from e

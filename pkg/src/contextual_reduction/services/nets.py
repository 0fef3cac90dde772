"""Parameter-space discretization: dense, sparse and structured nets."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from ..models.errors import CapacityExceeded, IoFailure
from ..models.geometry import NetKind, ParameterNet

logger = logging.getLogger(__name__)

POINT_CAP = 10**7
_RADIUS_SLACK = 1e-9


def _ball_volume(dim: int, radius: float) -> float:
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * radius**dim


def _lattice_ball(dim: int, resolution: float, cap: int = POINT_CAP) -> np.ndarray:
    """Integer vectors k with ||k * resolution|| <= 1, lexicographic order."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if resolution <= 0:
        raise ValueError("resolution must be positive")

    inverse = 1.0 / resolution
    half_diagonal = math.sqrt(dim) / 2
    if inverse > half_diagonal:
        lower = _ball_volume(dim, inverse - half_diagonal)
        if lower > cap:
            raise CapacityExceeded(
                f"grid at resolution {resolution} in dim {dim} has more than {cap} points; "
                "use a sparse or user-supplied net"
            )

    bound = inverse**2 * (1 + _RADIUS_SLACK)
    steps = int(math.floor(inverse + _RADIUS_SLACK))
    values = np.arange(-steps, steps + 1)
    squares = values**2

    partial = np.zeros((1, 0), dtype=np.int64)
    partial_sq = np.zeros(1, dtype=np.int64)
    for _ in range(dim):
        # every partial vector extends to a full one by padding zeros,
        # so the partial count never exceeds the final count
        extended = partial_sq[:, None] + squares[None, :]
        rows, cols = np.nonzero(extended <= bound)
        if rows.size > cap:
            raise CapacityExceeded(
                f"grid at resolution {resolution} in dim {dim} has more than {cap} points; "
                "use a sparse or user-supplied net"
            )
        partial = np.hstack([partial[rows], values[cols][:, None]])
        partial_sq = extended[rows, cols]
    return partial


def _project_to_ball(points: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(points, axis=1)
    outside = norms > 1.0
    if np.any(outside):
        points = points.copy()
        points[outside] /= norms[outside][:, None]
    return points


def build_dense_net(dim: int, resolution: float) -> ParameterNet:
    """All grid points of spacing `resolution` inside the unit ball.

    Rounding every coordinate of a ball point toward zero lands on a grid point
    inside the ball, so the covering radius is at most resolution * sqrt(dim).
    """
    points = _project_to_ball(_lattice_ball(dim, resolution) * resolution)
    logger.debug(f"Dense net: dim={dim} resolution={resolution} points={len(points)}")
    return ParameterNet(
        points=points,
        ambient_dim=dim,
        target_radius=resolution * math.sqrt(dim),
        kind=NetKind.DENSE,
        resolution=resolution,
    )


def _nonzero_lattice(dim: int, resolution: float) -> np.ndarray:
    """Lattice points of the dim-ball with every coordinate nonzero."""
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    lattice = _lattice_ball(dim, resolution)
    return lattice[np.all(lattice != 0, axis=1)]


def build_sparse_net(dim: int, sparsity: int, resolution: float) -> ParameterNet:
    """Union over supports of size <= s of s-dimensional grids embedded in R^dim.

    Points are generated by exact support, so the union has no duplicates.
    """
    if not 1 <= sparsity <= dim:
        raise ValueError(f"sparsity must be in [1, {dim}], got {sparsity}")

    blocks = [_nonzero_lattice(k, resolution) for k in range(sparsity + 1)]
    total = sum(math.comb(dim, k) * len(block) for k, block in enumerate(blocks))
    if total > POINT_CAP:
        raise CapacityExceeded(
            f"sparse net (dim={dim}, s={sparsity}, resolution={resolution}) "
            f"has {total} points, cap is {POINT_CAP}"
        )

    points = np.zeros((total, dim))
    row = 0
    for k, block in enumerate(blocks):
        if k == 0:
            row += 1  # origin
            continue
        for support in itertools.combinations(range(dim), k):
            points[row : row + len(block), list(support)] = block * resolution
            row += len(block)

    logger.debug(f"Sparse net: dim={dim} s={sparsity} resolution={resolution} points={total}")
    return ParameterNet(
        points=_project_to_ball(points),
        ambient_dim=dim,
        target_radius=resolution * math.sqrt(sparsity),
        kind=NetKind.SPARSE,
        sparsity=sparsity,
        resolution=resolution,
    )


def build_structured_net(
    latent_dim: int,
    embedding: np.ndarray | Callable[[np.ndarray], np.ndarray],
    resolution: float,
    lipschitz: float = 1.0,
) -> ParameterNet:
    """Net for parameters theta = f(phi) with ||phi|| <= 1 and f Lipschitz.

    `embedding` is either a (d, s) matrix or a callable mapping an (n, s) array
    of latent points to an (n, d) array.
    """
    latent = _lattice_ball(latent_dim, resolution) * resolution
    if callable(embedding):
        images = np.asarray(embedding(latent), dtype=float)
    else:
        images = latent @ np.asarray(embedding, dtype=float).T
    images = _project_to_ball(np.atleast_2d(images))
    _, first = np.unique(images, axis=0, return_index=True)
    images = images[np.sort(first)]
    return ParameterNet(
        points=images,
        ambient_dim=images.shape[1],
        target_radius=lipschitz * resolution * math.sqrt(latent_dim),
        kind=NetKind.STRUCTURED,
        resolution=resolution,
    )


def sample_unit_ball(rng: np.random.Generator, samples: int, dim: int) -> np.ndarray:
    """Uniform draws from the dim-dimensional unit ball."""
    directions = rng.standard_normal((samples, dim))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = rng.random(samples) ** (1.0 / dim)
    return directions * radii[:, None]


def covering_radius_estimate(net: ParameterNet, samples: int, rng_seed: int | None = 0) -> float:
    """Monte-Carlo estimate of the covering radius of `net`.

    Sparse nets are probed with uniform draws from a random s-dimensional
    coordinate sub-ball, every other kind with draws from the full ball.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(rng_seed)
    dim = net.ambient_dim

    if net.kind == NetKind.SPARSE and net.sparsity is not None:
        s = net.sparsity
        probes = np.zeros((samples, dim))
        supports = np.argsort(rng.random((samples, dim)), axis=1)[:, :s]
        values = sample_unit_ball(rng, samples, s)
        np.put_along_axis(probes, supports, values, axis=1)
    else:
        probes = sample_unit_ball(rng, samples, dim)

    distances, _ = cKDTree(net.points).query(probes)
    return float(np.max(distances))


def format_number(value: float) -> str:
    return repr(float(value))


def format_net(net: ParameterNet, weights: np.ndarray | None = None) -> str:
    """Line-oriented text: a `key=value` header, then one point per line."""
    header = f"dim={net.ambient_dim} kind={net.kind.value} radius={format_number(net.target_radius)}"
    if net.sparsity is not None:
        header += f" sparsity={net.sparsity}"
    lines = [header]
    for i, point in enumerate(net.points):
        fields = [format_number(x) for x in point]
        if weights is not None:
            fields.append(format_number(weights[i]))
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_header(line: str) -> dict[str, str]:
    header: dict[str, str] = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise ValueError(f"malformed header token: {token!r}")
        header[key] = value
    return header


def parse_net(text: str) -> ParameterNet:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty net file")
    header = parse_header(lines[0])
    dim = int(header["dim"])
    points = np.array([[float(x) for x in line.split()[:dim]] for line in lines[1:]], dtype=float)
    sparsity = int(header["sparsity"]) if "sparsity" in header else None
    return ParameterNet(
        points=points.reshape(-1, dim),
        ambient_dim=dim,
        target_radius=float(header.get("radius", "1.0")),
        kind=NetKind(header.get("kind", NetKind.USER.value)),
        sparsity=sparsity,
    )


def save_net(net: ParameterNet, path: Path) -> None:
    try:
        path.write_text(format_net(net))
    except OSError as e:
        raise IoFailure(f"cannot write net to {path}: {e}") from e


def load_net(path: Path) -> ParameterNet:
    """Read a user-supplied net file."""
    try:
        text = path.read_text()
    except OSError as e:
        raise IoFailure(f"cannot read net file {path}: {e}") from e
    net = parse_net(text)
    logger.info(f"Loaded net with {len(net)} points from {path}")
    return net

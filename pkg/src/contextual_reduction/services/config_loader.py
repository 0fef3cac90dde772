"""RunConfig from a JSON file plus command-line overrides."""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from ..models.environment import NoiseKind
from ..models.errors import ConfigInvalid, FieldError
from ..models.run import Algorithm, NetSource, NetSpec, RunConfig

logger = logging.getLogger(__name__)

DEFAULT_SUITE = "random-finite"
DEFAULT_DIM = 3
DEFAULT_HORIZON = 4096


def default_workers() -> int:
    """Worker count from CONTEXTUAL_REDUCTION_WORKERS, 1 when unset or invalid."""
    raw = os.environ.get("CONTEXTUAL_REDUCTION_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"Ignoring invalid CONTEXTUAL_REDUCTION_WORKERS={raw!r}")
        return 1


def parse_seeds(value: Any) -> tuple[int, ...]:
    """A list of seeds, a comma-separated string, or a count n meaning 0..n-1."""
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        if len(parts) == 1 and "," not in value:
            return tuple(range(int(parts[0])))
        return tuple(int(p) for p in parts)
    if isinstance(value, int):
        return tuple(range(value))
    return tuple(int(s) for s in value)


def read_config_file(path: Path) -> dict[str, Any]:
    try:
        with open(path) as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigInvalid([FieldError("config", f"file not found: {path}")]) from e
    except json.JSONDecodeError as e:
        raise ConfigInvalid([FieldError("config", f"invalid JSON: {e}")]) from e
    if not isinstance(data, dict):
        raise ConfigInvalid([FieldError("config", "top level must be an object")])
    return data


def merge_overrides(data: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Flags win over file values; None means the flag was not given."""
    merged = dict(data)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    return merged


def _net_spec(raw: Any, errors: list[FieldError]) -> NetSpec:
    if raw is None:
        return NetSpec()
    if not isinstance(raw, dict):
        errors.append(FieldError("net", "must be an object"))
        return NetSpec()
    try:
        source = NetSource(raw.get("kind", NetSource.DENSE.value))
    except ValueError:
        errors.append(FieldError("net.kind", f"unknown net kind {raw.get('kind')!r}"))
        source = NetSource.DENSE
    return NetSpec(
        source=source,
        resolution=float(raw.get("resolution", 0.25)),
        sparsity=raw.get("sparsity"),
        latent_dim=raw.get("latent_dim"),
        path=raw.get("path"),
    )


def build_run_config(data: Mapping[str, Any]) -> RunConfig:
    """Validate raw values and build a RunConfig, collecting every field error."""
    errors: list[FieldError] = []

    def number(key: str, default: Any, cast: type = int) -> Any:
        raw = data.get(key)
        if raw is None:
            return default
        try:
            return cast(raw)
        except (TypeError, ValueError):
            errors.append(FieldError(key, f"expected {cast.__name__}, got {raw!r}"))
            return default

    suite = data.get("suite", DEFAULT_SUITE)
    if not isinstance(suite, str) or not suite:
        errors.append(FieldError("suite", "must be a nonempty string"))

    try:
        algorithm = Algorithm(data.get("algorithm", Algorithm.EPOCH.value))
    except ValueError:
        choices = ", ".join(a.value for a in Algorithm)
        errors.append(FieldError("algorithm", f"unknown algorithm {data.get('algorithm')!r}; choose from {choices}"))
        algorithm = Algorithm.EPOCH

    dim = number("dim", DEFAULT_DIM)
    horizon = number("horizon", DEFAULT_HORIZON)
    delta = number("delta", 0.1, float)
    instance_seed = number("instance_seed", 0)
    epsilon = number("epsilon", None, float)
    budget = number("budget", None, float)
    sparsity = number("sparsity", None)
    batches = number("batches", 8)
    workers = number("workers", default_workers())

    if dim is not None and dim < 1:
        errors.append(FieldError("dim", "must be at least 1"))
    if horizon is not None and horizon < 1:
        errors.append(FieldError("horizon", "T must be at least 1"))
    if delta is not None and not 0 < delta < 1:
        errors.append(FieldError("delta", "must be in (0, 1)"))
    if epsilon is not None and epsilon < 0:
        errors.append(FieldError("epsilon", "must be nonnegative"))
    if budget is not None and budget < 0:
        errors.append(FieldError("budget", "must be nonnegative"))
    if workers is not None and workers < 1:
        errors.append(FieldError("workers", "must be at least 1"))
    if algorithm == Algorithm.BATCHED and (batches < 2 or batches % 2):
        errors.append(FieldError("batches", "must be even and at least 2"))

    try:
        seeds = parse_seeds(data.get("seeds", (0,)))
    except (TypeError, ValueError):
        errors.append(FieldError("seeds", "must be a list of integers or a count"))
        seeds = (0,)
    if not seeds:
        errors.append(FieldError("seeds", "must be nonempty"))
    elif len(set(seeds)) != len(seeds):
        errors.append(FieldError("seeds", "must be distinct"))

    known_distribution = data.get("known_distribution", False)
    if not isinstance(known_distribution, bool):
        errors.append(FieldError("known_distribution", f"expected true or false, got {known_distribution!r}"))
        known_distribution = False

    noise = None
    if data.get("noise") is not None:
        try:
            noise = NoiseKind(data["noise"])
        except ValueError:
            errors.append(FieldError("noise", f"unknown noise kind {data['noise']!r}"))

    net = _net_spec(data.get("net"), errors)
    if net.resolution <= 0:
        errors.append(FieldError("net.resolution", "must be positive"))
    if net.source == NetSource.SPARSE:
        s = net.sparsity or sparsity
        if s is None or dim is None or not 1 <= s <= dim:
            errors.append(FieldError("net.sparsity", "sparse nets need 1 <= sparsity <= dim"))
    if net.source == NetSource.STRUCTURED and (net.latent_dim is None or net.latent_dim < 1):
        errors.append(FieldError("net.latent_dim", "structured nets need a positive latent_dim"))
    if net.source == NetSource.FILE:
        if not net.path:
            errors.append(FieldError("net.path", "file nets need a path"))
        elif not Path(net.path).exists():
            errors.append(FieldError("net.path", f"net file not found: {net.path}"))

    if errors:
        raise ConfigInvalid(errors)

    return RunConfig(
        suite=suite,
        algorithm=algorithm,
        dim=dim,
        horizon=horizon,
        net=net,
        delta=delta,
        seeds=seeds,
        instance_seed=instance_seed,
        epsilon=epsilon,
        budget=budget,
        sparsity=sparsity,
        batches=batches,
        noise=noise,
        known_distribution=known_distribution,
        workers=workers,
    )


def load_run_config(path: Path | None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Read `path` (when given), apply flag overrides and validate."""
    data = read_config_file(path) if path is not None else {}
    return build_run_config(merge_overrides(data, overrides or {}))

"""Preset suite registry loaded from a JSON file."""

import json
import logging
import os
from pathlib import Path

from ..models.environment import AdversaryStrategy, ContextDistribution, EnvironmentSpec, NoiseKind
from ..models.errors import UnknownSuiteName
from .suites import STANDARD_SUITES, SuiteSpec, build_suite, make_standard_suite

logger = logging.getLogger(__name__)


class SuiteStore:
    """Named suites: the standard constructions plus presets from a file."""

    def __init__(self, presets: list[SuiteSpec] | None = None) -> None:
        self._presets: dict[str, SuiteSpec] = {}
        for preset in presets or []:
            self.add(preset)

    def add(self, spec: SuiteSpec) -> None:
        if spec.name in STANDARD_SUITES:
            logger.warning(f"Preset {spec.name!r} shadows the standard suite of the same name")
        self._presets[spec.name] = spec

    def get(self, name: str) -> SuiteSpec | None:
        return self._presets.get(name)

    def names(self) -> list[str]:
        return [*STANDARD_SUITES, *(n for n in self._presets if n not in STANDARD_SUITES)]

    def resolve(
        self, name: str, dim: int, seed: int
    ) -> tuple[ContextDistribution, EnvironmentSpec]:
        """Instance for `name`. Presets carry their own dim and seed."""
        preset = self._presets.get(name)
        if preset is not None:
            return build_suite(preset)
        if name in STANDARD_SUITES:
            return make_standard_suite(name, dim, seed)
        raise UnknownSuiteName(f"unknown suite {name!r}; known: {', '.join(self.names())}")


def _parse_preset(data: dict, index: int) -> SuiteSpec:
    theta = data.get("theta_star")
    return SuiteSpec(
        name=data.get("name", f"suite-{index + 1}"),
        base=data["base"],
        dim=int(data.get("dim", 3)),
        seed=int(data.get("seed", 0)),
        noise=NoiseKind(data.get("noise", NoiseKind.GAUSSIAN.value)),
        epsilon=data.get("epsilon"),
        budget=data.get("budget"),
        adversary=AdversaryStrategy(data.get("adversary", AdversaryStrategy.FLIP_OPTIMAL.value)),
        sparsity=data.get("sparsity"),
        latent_dim=data.get("latent_dim"),
        supports=int(data.get("supports", 5)),
        actions_per_support=int(data.get("actions_per_support", 10)),
        theta_star=tuple(float(x) for x in theta) if theta is not None else None,
    )


def _load_presets_from_json(path: Path) -> list[SuiteSpec]:
    """Load preset suites from a JSON file."""
    presets: list[SuiteSpec] = []

    try:
        with open(path) as f:
            data = json.load(f)

        suites = data if isinstance(data, list) else data.get("suites", [])

        for i, suite_data in enumerate(suites):
            try:
                spec = _parse_preset(suite_data, i)
                if spec.base not in STANDARD_SUITES:
                    raise ValueError(f"unknown base {spec.base!r}")
                presets.append(spec)
            except (KeyError, ValueError, TypeError) as e:
                logger.warning(f"Skipping invalid suite at index {i}: {e}")

    except FileNotFoundError:
        logger.warning(f"Suites file not found: {path}")
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in suites file: {e}")

    if presets:
        logger.info(f"Loaded {len(presets)} preset suite(s) from {path}")

    return presets


# Singleton instance
_store: SuiteStore | None = None


def get_suite_store() -> SuiteStore:
    """Get the singleton suite store instance."""
    global _store
    if _store is None:
        presets: list[SuiteSpec] = []

        suites_file = os.environ.get("CONTEXTUAL_REDUCTION_SUITES")
        if suites_file:
            presets = _load_presets_from_json(Path(suites_file))

        _store = SuiteStore(presets=presets)
    return _store


def reset_suite_store() -> None:
    """Drop the singleton so the next lookup re-reads the environment."""
    global _store
    _store = None

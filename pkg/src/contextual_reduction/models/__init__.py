"""Domain models: nets, designs, instances, reduction state and run records."""

from .environment import (
    ActionSet,
    AdversarySpec,
    AdversaryStrategy,
    Context,
    ContextDistribution,
    ContextKind,
    CoordinateDistribution,
    EnvironmentSpec,
    Misspecification,
    NoiseKind,
    ProductActionSet,
    RoundOutcome,
)
from .geometry import DesignWeights, Estimate, NetKind, ParameterNet
from .reduction import (
    ConfidenceSchedule,
    ConfidenceVariant,
    EpochSchedule,
    GMode,
    GTable,
    MartingaleDiagnostic,
    PhaseRecord,
    ProductReduction,
)
from .run import (
    Algorithm,
    EpochRecord,
    NetSource,
    NetSpec,
    RegretTrace,
    RunConfig,
    RunFailure,
    ScalingReport,
    ScalingRow,
)

__all__ = [
    "ActionSet",
    "AdversarySpec",
    "AdversaryStrategy",
    "Algorithm",
    "ConfidenceSchedule",
    "ConfidenceVariant",
    "Context",
    "ContextDistribution",
    "ContextKind",
    "CoordinateDistribution",
    "DesignWeights",
    "EnvironmentSpec",
    "EpochRecord",
    "EpochSchedule",
    "Estimate",
    "GMode",
    "GTable",
    "MartingaleDiagnostic",
    "Misspecification",
    "NetKind",
    "NetSource",
    "NetSpec",
    "NoiseKind",
    "ParameterNet",
    "PhaseRecord",
    "ProductActionSet",
    "ProductReduction",
    "RegretTrace",
    "RoundOutcome",
    "RunConfig",
    "RunFailure",
    "ScalingReport",
    "ScalingRow",
]

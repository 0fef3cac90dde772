"""Error definitions."""

from __future__ import annotations

from dataclasses import dataclass


class ReductionError(Exception):
    """Base error. `code` is a short machine-readable tag."""

    code = "ERROR"

    def __init__(self, message: str, code: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code


class CapacityExceeded(ReductionError):
    """A net would exceed the point cap."""

    code = "CAPACITY_EXCEEDED"


class DegenerateActions(ReductionError):
    """Every action is the zero vector."""

    code = "DEGENERATE_ACTIONS"


class ActionNotInContext(ReductionError):
    code = "ACTION_NOT_IN_CONTEXT"


class UnknownSuiteName(ReductionError):
    code = "UNKNOWN_SUITE"


class NotFiniteSupport(ReductionError):
    code = "NOT_FINITE_SUPPORT"


class NotProduct(ReductionError):
    code = "NOT_PRODUCT"


class ScheduleMismatch(ReductionError):
    """Epoch boundaries do not partition rounds 1..T."""

    code = "SCHEDULE_MISMATCH"


class BatchTooShort(ReductionError):
    """A batch is shorter than the design support it must cover."""

    code = "BATCH_TOO_SHORT"


class EmptySurvivorSet(ReductionError):
    """Elimination removed every arm. Cannot happen unless the solver is broken."""

    code = "EMPTY_SURVIVORS"


class RequiresFiniteSupport(ReductionError):
    code = "REQUIRES_FINITE_SUPPORT"


class InsufficientGrid(ReductionError):
    code = "INSUFFICIENT_GRID"


class IoFailure(ReductionError):
    code = "IO_FAILURE"


@dataclass
class FieldError:
    """A single invalid config field."""

    field: str
    message: str


class ConfigInvalid(ReductionError):
    """Run configuration failed validation."""

    code = "CONFIG_INVALID"

    def __init__(self, errors: list[FieldError]) -> None:
        self.errors = errors
        detail = "; ".join(f"{e.field}: {e.message}" for e in errors)
        super().__init__(f"Invalid configuration: {detail}")


class RunFailed(ReductionError):
    """One or more seeds of a run failed."""

    code = "RUN_FAILED"

    def __init__(self, failures: list) -> None:  # list[RunFailure]
        self.failures = failures
        detail = "; ".join(f"seed {f.seed}: [{f.code}] {f.message}" for f in failures)
        super().__init__(f"{len(failures)} seed(s) failed: {detail}")

"""CLI verbs."""

from . import emit, run, scale, verify

__all__ = ["emit", "run", "scale", "verify"]

"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SkewpressError(Exception):
    """Base class for all package errors."""


class InputError(SkewpressError, ValueError):
    """Malformed input: bad letters, inadmissible words, invalid tables."""


class PreconditionError(SkewpressError, RuntimeError):
    """A structural precondition fails (e.g. shift not topologically mixing)."""


class ResourceError(SkewpressError, RuntimeError):
    """A guarded computation exceeds its configured budget."""


class SchemaError(SkewpressError, ValueError):
    """Scenario file violates the expected schema."""


class SupportError(SkewpressError, RuntimeError):
    """A sequence needed for extrapolation has empty or degenerate support."""


class PruningWarning(RuntimeWarning):
    """Pruning discarded a non-negligible share of the live mass."""

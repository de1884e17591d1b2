"""Exception hierarchy shared by every module.

Each class carries a stable machine-readable ``code`` that the CLI copies
into error reports.
"""

from __future__ import annotations


class ScanlawError(Exception):
    code = "error"


class ArgumentError(ScanlawError, ValueError):
    code = "argument"


class SchemaError(ScanlawError, ValueError):
    code = "schema"


class DegenerateDistributionError(ScanlawError, ValueError):
    code = "degenerate_distribution"


class DomainError(ScanlawError, ValueError):
    """Argument outside the region where a function is finite/defined."""

    code = "domain"

    def __init__(self, message: str, bound: float | None = None):
        super().__init__(message)
        self.bound = bound


class RateInfinite(DomainError):
    """I(s) = +inf because s is at or beyond the right end of the support."""

    code = "rate_infinite"


class CapabilityError(ScanlawError):
    code = "capability"


class ConsistencyError(ScanlawError):
    code = "consistency"


class NumericError(ScanlawError):
    code = "numeric"

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class PrecisionError(ScanlawError):
    code = "precision_not_achievable"


class ResourceError(ScanlawError):
    code = "resource"

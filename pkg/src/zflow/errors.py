"""Exception hierarchy shared by every zflow module."""

from __future__ import annotations


class ZFlowError(Exception):
    """Base class for all zflow errors."""


class InvalidArgument(ZFlowError, ValueError):
    pass


class ParseError(ZFlowError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ResourceLimitError(ZFlowError):
    """An exact algorithm was asked to run beyond its configured size limit."""

    def __init__(self, what: str, limit_name: str, limit: int, actual: int):
        super().__init__(f"{what}: {actual} exceeds limit {limit_name}={limit}")
        self.limit_name = limit_name
        self.limit = limit
        self.actual = actual


class HypothesisError(ZFlowError):
    """A construction was applied to a graph outside its premises."""


class InternalInconsistency(ZFlowError):
    """Raised when a guaranteed object could not be found. Always a bug."""

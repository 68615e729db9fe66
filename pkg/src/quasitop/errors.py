"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class QuasitopError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    rule: str | None = None


class RefinementBudgetExceeded(QuasitopError):
    pass


class DimensionMismatch(QuasitopError, ValueError):
    pass


class NotASubgroup(QuasitopError):
    pass


class RationalDirection(QuasitopError):
    """E contains a nonzero integer vector."""


class EmptyWindow(QuasitopError):
    pass


class InfiniteFamily(QuasitopError):
    """A hyperplane orientation splits into infinitely many Gamma-classes."""

    def __init__(self, orientation, message: str | None = None):
        self.orientation = tuple(orientation)
        super().__init__(message or f"orientation {self.orientation} gives infinitely many hyperplane classes")


class InfiniteOrbitSet(QuasitopError):
    """Some generating subset produces infinitely many orbit classes."""

    def __init__(self, subset, level: int, message: str | None = None):
        self.subset = tuple(subset)
        self.level = level
        super().__init__(message or f"subset {self.subset} yields infinitely many orbits at level {level}")


class InfiniteTables(QuasitopError):
    pass


class Incomplete(QuasitopError):
    """Enumeration stopped at the configured subset cap."""


class NotTransversal(QuasitopError):
    pass


class NotSpanning(QuasitopError):
    pass


class HypothesisViolated(QuasitopError):
    pass


class UnsupportedDimension(QuasitopError):
    pass


class IOFailure(QuasitopError):
    pass


class ParseError(QuasitopError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class VersionMismatch(QuasitopError):
    pass

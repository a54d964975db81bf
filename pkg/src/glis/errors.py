"""Exception types shared across the package."""


class GlisError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(GlisError, ValueError):
    pass


class NotPositiveDefinite(GlisError):
    pass


class Infeasible(GlisError):
    pass


class Unbounded(GlisError):
    pass


class InfeasibleConstraints(GlisError):
    pass


class DegenerateBox(GlisError, ValueError):
    pass


class NotFullDimensional(GlisError):
    pass


class LowFeasibleVolume(GlisError):
    pass


class CoincidentPoint(GlisError, ValueError):
    pass


class DuplicatePoint(GlisError, ValueError):
    pass


class InvalidPhase(GlisError, RuntimeError):
    pass


class UnknownBenchmark(GlisError, KeyError):
    pass


class EnumerationBoundExceeded(GlisError):
    pass

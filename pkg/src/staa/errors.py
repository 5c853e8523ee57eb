"""Exception types raised across the package.

Every error carries a plain message; callers that add context (e.g. the
timestep a failure occurred at) re-raise the same type with an amended
message so handlers can keep matching on the class.
"""


class StaaError(Exception):
    """Base class for all package errors."""


class ConfigError(StaaError):
    """A hyperparameter is outside its valid range."""


class ZeroRowError(StaaError):
    """Row normalization hit a zero row sum (self-loops were skipped)."""


class ConvergenceError(StaaError):
    """The dense eigensolver failed on a pathological input."""


class NoSpectrumError(StaaError):
    """All eigenvalues are numerically zero (empty graph); no scale ladder exists."""


class InvalidBetaError(StaaError):
    """An activity coefficient exceeds the 1 - alpha walk budget."""


class SingularSystemError(StaaError):
    """The walk system could not be solved; signals corrupted inputs."""


class MaxItersError(StaaError):
    """Fixed-point iteration did not converge within the iteration budget."""


class DegenerateSpecError(StaaError):
    """Generator spec too sparse: expected persistent degree below 1."""


class ExhaustedError(StaaError):
    """Fewer non-edge pairs exist than the requested negative sample size."""


class DegenerateError(StaaError):
    """AUC requested with an empty positive or negative class."""


class ParseError(StaaError):
    """Malformed edge-stream line; message includes the line number."""


class NegativeTimestampError(StaaError):
    """Edge-stream record with a negative timestamp."""


class EmptyStreamError(StaaError):
    """Snapshot partitioning received no records."""

"""Exception hierarchy shared across the package."""


class QngmError(Exception):
    """Base class for all package errors."""


class NotHermitianError(QngmError):
    """Matrix expected to be Hermitian is not (beyond tolerance)."""


class DomainError(QngmError):
    """Scalar-function argument outside its domain (e.g. log of 0, t <= 0)."""


class SingularError(QngmError):
    """Linear system is singular or too ill-conditioned to solve."""


class DegenerateSupportError(QngmError):
    """Probability distribution has zero or negative entries."""


class ShapeMismatchError(QngmError):
    """Operands have incompatible dimensions."""


class RankDeficientError(QngmError):
    """Density operator is rank-deficient where full rank is required."""


class NumericalError(QngmError):
    """A numerical sanity check failed (imaginary residue, kernel block, ...)."""


class MetricUndefinedError(QngmError):
    """Metric is undefined: rank-deficient state with f(0) = 0."""


class ConfigError(QngmError):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    """Malformed config file or flag value."""


class ValidationError(ConfigError):
    """Config parsed but violates one or more constraints."""

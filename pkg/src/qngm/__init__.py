"""Quantum natural gradient over the Petz family of quantum Fisher metrics."""

from . import classical, cli, divergence, linalg, optimizer, petz, qfim, states
from .errors import (
    ConfigError,
    DegenerateSupportError,
    DomainError,
    MetricUndefinedError,
    NotHermitianError,
    NumericalError,
    ParseError,
    QngmError,
    RankDeficientError,
    ShapeMismatchError,
    SingularError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "classical",
    "cli",
    "divergence",
    "linalg",
    "optimizer",
    "petz",
    "qfim",
    "states",
    "QngmError",
    "NotHermitianError",
    "DomainError",
    "SingularError",
    "DegenerateSupportError",
    "ShapeMismatchError",
    "RankDeficientError",
    "NumericalError",
    "MetricUndefinedError",
    "ConfigError",
    "ParseError",
    "ValidationError",
]

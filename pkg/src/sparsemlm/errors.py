"""
Exception hierarchy for sparsemlm.

Every failure the CLI can report maps to one of these classes, and each
class carries the process exit code it maps to.
"""

from .constants import EXIT_CONFIG_ERROR, EXIT_DATA_ERROR, EXIT_NUMERICAL_ERROR


class SparseMLMError(Exception):
    """Base class for all sparsemlm errors."""

    exit_code: int = 1


class ConfigError(SparseMLMError):
    """Invalid or incomplete run configuration."""

    exit_code = EXIT_CONFIG_ERROR


class DataError(SparseMLMError):
    """Input data that cannot form a valid problem (shape, values, parsing)."""

    exit_code = EXIT_DATA_ERROR


class OracleSizeError(DataError):
    """The explicit Kronecker design would exceed the memory guard."""


class NumericalError(SparseMLMError):
    """Degenerate designs, singular systems, or step-size underflow."""

    exit_code = EXIT_NUMERICAL_ERROR


class InvalidParameterError(SparseMLMError, ValueError):
    """A numeric argument is outside its domain (negative lambda or rho)."""

    exit_code = EXIT_CONFIG_ERROR

"""Exception hierarchy shared by all modules.

Exit codes used by the CLI: configuration errors map to 2, numeric and
integrity errors to 3, I/O problems to 4.
"""


class EntdynError(Exception):
    """Base class for package errors."""


class DomainError(EntdynError):
    """Input outside the mathematical domain of an operation."""


class ValidationError(EntdynError):
    """Input violates a constructor invariant (normalization, hermiticity...)."""


class ConfigurationError(EntdynError):
    """Inconsistent scenario/model configuration, detected before compute."""


class NumericError(EntdynError):
    """Numerical procedure failed (eigensolver, SVD, step underflow)."""


class IntegrityError(EntdynError):
    """A propagated state violated density-matrix invariants beyond tolerance."""

"""Exception types shared across the package."""


class FracollError(Exception):
    """Base class for all package errors."""


class DomainError(FracollError, ValueError):
    """An argument lies outside the mathematical or physical domain of an operation."""


class ConfigurationError(FracollError, ValueError):
    """Inputs are structurally incomplete or inconsistent (missing tables, bad keys, ...)."""

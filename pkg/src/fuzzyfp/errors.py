"""Exception types shared across the package."""


class FuzzyFPError(Exception):
    """Base class for all errors raised by fuzzyfp."""


class DomainError(FuzzyFPError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(FuzzyFPError, ValueError):
    """A user-supplied function returned a value outside its declared range."""


class ConfigurationError(FuzzyFPError, ValueError):
    """An object was built from an inconsistent configuration."""


class NumericError(FuzzyFPError, ArithmeticError):
    """An iteration produced non-finite coordinates."""

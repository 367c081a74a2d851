"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Array shapes do not agree."""


class DomainError(ValueError):
    """Input lies outside the domain of an operation."""


class NumericError(ArithmeticError):
    """A non-finite value appeared during computation."""


class FormatError(ValueError):
    """A file does not match its declared binary or text format."""

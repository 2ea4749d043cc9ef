"""Exception types shared across the package."""


class PadicDmlError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(PadicDmlError):
    """Operands live in affine spaces of different dimensions."""


class FieldMismatch(PadicDmlError):
    """Operands carry different coefficient fields."""


class NonIntegralAtP(PadicDmlError):
    """A denominator is divisible by p, so reduction mod p^e is undefined."""


class NoGoodPrime(PadicDmlError):
    """No candidate prime keeps every input coefficient p-integral."""


class BudgetExceeded(PadicDmlError):
    """A configured size/step budget was hit before the computation finished."""


class PrecisionExhausted(PadicDmlError):
    """The working p-adic precision is too coarse to certify the result."""


class ContractionNotCertified(PadicDmlError):
    """The displacement norm bound required by the interpolation engine fails."""


class DegenerateRecurrence(PadicDmlError):
    """A linear recurrence whose trailing coefficient vanishes and cannot be reduced."""


class ParseError(PadicDmlError):
    """Syntax or name error in polynomial/point source text."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at offset {position})")
        self.message = message
        self.position = position


class SchemaError(PadicDmlError):
    """A problem file violates the expected document structure."""

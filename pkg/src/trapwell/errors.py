"""Exception hierarchy shared by all trapwell modules."""


class TrapwellError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TrapwellError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ValidationError(TrapwellError, ValueError):
    """An input object violates its invariants; message names the fields."""


class OverflowRangeError(TrapwellError, OverflowError):
    """Unscaled evaluation would overflow; use the scaled variant instead."""


class DegenerateFactorError(TrapwellError, ArithmeticError):
    """A factor denominator is numerically zero."""


class DegenerateCoefficientError(TrapwellError, ArithmeticError):
    """Both forms of a dual coefficient expression have vanishing denominators."""


class NormalizationError(TrapwellError, ArithmeticError):
    """The normalization integral could not be evaluated to tolerance."""


class BasisError(TrapwellError, ValueError):
    """A supplied eigenbasis fails its orthonormality check."""


class IntegrationError(TrapwellError, ArithmeticError):
    """Adaptive quadrature failed to converge."""


class InfeasibleJumpError(TrapwellError, ArithmeticError):
    """No positive-norm solution exists for the prescribed jumps."""


class UndefinedRatioError(TrapwellError, ZeroDivisionError):
    """A proportionality ratio has a vanishing jump in its denominator."""

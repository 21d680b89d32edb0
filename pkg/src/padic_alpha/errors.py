"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations


class PadicAlphaError(Exception):
    """Base class for all toolkit errors."""


class ZeroDenominator(PadicAlphaError, ZeroDivisionError):
    pass


class DivisionByZero(PadicAlphaError, ZeroDivisionError):
    pass


class PrecisionExhausted(PadicAlphaError):
    """Carried precision is not enough to decide the requested quantity.

    ``trace`` holds the partial Newton trace when raised by the solver.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class IndeterminateProduct(PadicAlphaError, ArithmeticError):
    pass


class NegativeValuation(PadicAlphaError, ValueError):
    pass


class InsufficientPrecision(PadicAlphaError, ValueError):
    pass


class PolySyntaxError(PadicAlphaError, SyntaxError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.msg = message
        self.line = line
        self.column = column


class ArityMismatch(PadicAlphaError, ValueError):
    pass


class UnknownVariable(PadicAlphaError, ValueError):
    pass


class SingularWithinPrecision(PadicAlphaError, ArithmeticError):
    """No pivot distinguishable from zero was found.

    ``rank`` is the number of pivots eliminated before failing and
    ``zero_bound`` the largest absolute precision p^a to which every remaining
    entry is known to vanish (``None`` if they are exact zeros).  Raising the
    working precision past ``zero_bound`` may reveal a usable pivot.
    """

    def __init__(self, message: str, rank: int = 0, zero_bound=None, trace=None):
        super().__init__(message)
        self.rank = rank
        self.zero_bound = zero_bound
        self.trace = trace


class NotCertified(PadicAlphaError):
    pass


class IterationCap(PadicAlphaError):
    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class NotARoot(PadicAlphaError, ValueError):
    pass


class MultipleRoot(PadicAlphaError, ValueError):
    pass


class NotUnivariate(PadicAlphaError, ValueError):
    pass


class NonIntegralInput(PadicAlphaError, ValueError):
    pass


class BudgetExceeded(PadicAlphaError):
    pass


class EmptyRootList(PadicAlphaError, ValueError):
    pass

"""
Errors and exceptions for haloproj.
"""


class DimensionMismatch(ValueError):
    pass


class NonFiniteValue(ValueError):
    pass


class NotUnitNormal(ValueError):
    pass


class InvalidParameter(ValueError):
    pass


class DomainOverflow(ArithmeticError):
    pass


class StationaryPoint(ArithmeticError):
    pass


class QPBreakdown(RuntimeError):
    pass


class ConstraintBudgetExceeded(ValueError):
    pass


class ResolutionLimit(ArithmeticError):
    """
    The cut H(x_n, T x_n) is below floating-point resolution while the
    residual still exceeds the stopping tolerance.
    """
    pass


class SpecError(ValueError):
    """
    Error in a problem document.

    ``key`` names the offending entry of the document.
    """
    def __init__(self, key, message):
        super(SpecError, self).__init__(
            u"[{key}] {message}".format(key=key, message=message)
        )
        self.key = key

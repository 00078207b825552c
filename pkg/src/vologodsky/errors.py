"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class VologodskyError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(VologodskyError, ValueError):
    """Malformed literal or document."""


class PadicError(VologodskyError, ArithmeticError):
    pass


class PrecisionError(PadicError):
    """A value is indistinguishable from zero at its tracked precision."""


class PadicZeroDivisionError(PadicError, ZeroDivisionError):
    pass


class NotAUnitError(PadicError):
    pass


class GraphError(VologodskyError, ValueError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class DivisorMeetsAnnulusError(VologodskyError, ValueError):
    pass


class ReductionTypeError(VologodskyError, ValueError):
    pass

"""Error taxonomy shared by every module.

Everything raised on purpose derives from LabError, so callers can
distinguish deliberate refusals (bad input, exhausted budget, genuine
numerical tie) from plain bugs.
"""


class LabError(Exception):
    """Base class for all deliberate errors raised by this package."""


class DomainError(LabError):
    """Input outside the documented domain of an operation."""


class TrivialCurveError(DomainError):
    """A word reduced to the empty word where a curve was required."""


class NumericalError(LabError):
    """A numerical routine lost the precision its contract requires."""


class NotHyperbolicError(NumericalError):
    """A matrix expected to be hyperbolic has |trace| <= 2 + tolerance."""


class BudgetError(LabError):
    """An iterative search exhausted its configured budget."""


class IndeterminateError(NumericalError):
    """A geometric predicate stayed ambiguous after precision escalation."""


class NoCrossingError(DomainError):
    """A curve required to cross the core of an annular cover does not."""


class SharedEndpointError(IndeterminateError):
    """Two arcs share a boundary endpoint within tolerance; the integer
    pairing is undefined there."""


class NoEssentialCurveError(DomainError):
    """A surgery produced no essential non-peripheral boundary class."""


class BoundViolation(LabError):
    """A certified bound failed to hold on a concrete instance."""

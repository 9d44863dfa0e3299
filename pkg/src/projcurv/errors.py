"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``); numerical
failures derive from :class:`NumericalError`. The CLI maps the two families to
exit codes 2 and 3.
"""


class ProjcurvError(Exception):
    """Base class for all package errors."""


class InputError(ProjcurvError, ValueError):
    """Malformed or out-of-contract input."""


class DomainError(InputError):
    """Argument outside the mathematical domain of a formula."""


class GapError(DomainError):
    """A total curvature value lies in a gap between degree intervals."""


class InvalidBettiError(InputError):
    """Betti vector not realizable by a smooth complex projective manifold."""


class NumericalError(ProjcurvError):
    """Numerical failure that the caller may recover from."""


class DegenerateFiber(NumericalError):
    """Leading fiber coefficient vanishes; the projection is degenerate."""


class SingularPointError(NumericalError):
    """The variety is (numerically) singular at the requested point."""


class SpectrumStructureError(NumericalError):
    """Shape operator spectrum violates the fiber-zero / plus-minus structure."""


class BranchContinuationError(NumericalError):
    """Newton continuation of a fiber root failed to converge."""

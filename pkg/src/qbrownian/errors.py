"""Exception types shared across the package.

Everything raised on purpose derives from QBrownianError so callers (and the
command line front end) can distinguish physics/domain problems from bugs.
"""


class QBrownianError(Exception):
    """Base class for all deliberate errors raised by this package."""


class DomainError(QBrownianError, ValueError):
    """Input outside the mathematical domain of an operation.

    Examples: overdamped parameters passed to an underdamped-only closed
    form, a Laplace transform evaluated at Re z <= 0, trigamma at a pole.
    """


class DivergentMomentError(DomainError):
    """A requested moment diverges for the given damping model.

    The canonical case is the momentum variance with strictly ohmic
    friction, whose Matsubara sum diverges logarithmically; a finite
    memory time (e.g. a Drude cutoff) is required.
    """


class DivergentProductError(DomainError):
    """The partition-function product diverges for the given damping model.

    Strictly ohmic friction makes the free-energy shift ultraviolet
    divergent; only cutoff models have a finite partition function.
    """


class SummationError(QBrownianError, RuntimeError):
    """A tail-corrected infinite sum failed its internal consistency check."""


class CoverageError(QBrownianError, ValueError):
    """A discretized bath does not cover its target damping kernel.

    Raised when the reconstructed zero-time friction kernel deviates from
    the target by more than the coverage tolerance (default 5%), which
    indicates the mode grid is too coarse or the cutoff too low.
    """


class ContourError(QBrownianError, RuntimeError):
    """Numerical inverse Laplace transform failed its contour-shift check."""


class RouteMismatchError(QBrownianError, RuntimeError):
    """Two independent evaluation routes of one quantity disagree.

    Raised e.g. when the Fourier-mode and double-quadrature values of the
    effective action differ beyond tolerance, which points at kernel
    resolution problems or a path too rough for the grid.
    """


class ExtrapolationError(QBrownianError, RuntimeError):
    """A low-temperature extrapolation did not converge."""

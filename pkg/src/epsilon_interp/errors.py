"""Exception and warning types shared across the package."""


class EpsilonInterpError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(EpsilonInterpError, ValueError):
    """Vector operands do not share the same dimension."""


class NonContiguousNodesError(EpsilonInterpError, ValueError):
    """Equal interpolation nodes are not adjacent in the node list."""


class NonFiniteValueError(EpsilonInterpError, ValueError):
    """A NaN or infinity appeared where a finite number is required."""


class MissingSampleError(EpsilonInterpError, ValueError):
    """A sample set lacks a value or derivative needed by the tableau."""


class SingularSystemError(EpsilonInterpError):
    """The defining linear system has no reliable solution.

    Raised when a pivot falls below the relative threshold during
    elimination; signals that the uniqueness determinant is (numerically)
    zero for this node/pole configuration.
    """


class EvalAtPoleError(EpsilonInterpError, ZeroDivisionError):
    """The interpolant was evaluated where its denominator vanishes."""


class InsideRegionError(EpsilonInterpError, ValueError):
    """The exterior level function was requested inside the node region."""


class StudyInconclusiveError(EpsilonInterpError):
    """Too few usable sweep points to fit a convergence rate."""


class SamplesFormatError(EpsilonInterpError, ValueError):
    """A samples or config file is malformed."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class RootFindingStalled(RuntimeWarning):
    """Simultaneous root iteration hit its iteration cap before converging."""

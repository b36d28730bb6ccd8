"""Exception types shared across the package."""


class ChshKcbsError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidCycle(ChshKcbsError):
    """Cycle size n is not an odd integer >= 5."""


class IndexOutOfRange(ChshKcbsError):
    """Index outside the valid range for the requested family."""


class DimensionMismatch(ChshKcbsError):
    """Operator and state dimensions are incompatible."""


class NotHermitian(ChshKcbsError):
    """Matrix fails the Hermiticity tolerance."""


class NotUnitary(ChshKcbsError):
    """Matrix fails the unitarity tolerance."""


class NotNormalized(ChshKcbsError):
    """State vector fails the normalization tolerance."""


class ImaginaryResidue(ChshKcbsError):
    """Expectation value of a Hermitian operator came out non-real."""


class NoIntersection(ChshKcbsError):
    """The two violation margins do not cross inside the search bracket."""


class EmptyGrid(ChshKcbsError):
    """A parameter grid has no points."""

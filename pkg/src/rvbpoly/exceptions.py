"""Exception types shared across the package."""


class RvbPolyError(ValueError):
    """Base class for all errors raised by this package."""


class SubsetOutOfRange(RvbPolyError):
    """A subset mask references sites outside the declared site range."""


class ZeroPolynomial(RvbPolyError):
    """Operation is undefined on the zero polynomial."""


class ConstantPolynomial(RvbPolyError):
    """Operation is undefined on constant polynomials."""


class OverlappingSupport(RvbPolyError):
    """Product of two polynomials sharing a variable would leave the
    degree-at-most-one-per-variable space."""


class InvalidDegree(RvbPolyError):
    """Degree parameter outside the admissible range."""


class InvalidGamma(RvbPolyError):
    """Hole count outside 1 <= gamma < nu."""


class TooLarge(RvbPolyError):
    """Problem size exceeds the hard cap for this operation."""


class TooSmall(RvbPolyError):
    """Input below the minimum size this operation is defined for."""


class NotDecomposable(RvbPolyError):
    """The covering set does not map E's sublattice-A sites onto E's
    sublattice-B sites for every covering."""


class DegenerateShape(RvbPolyError):
    """The covering set is flat or a pole via this cut, so the requested
    diagnostic carries no information."""


class NotPrime(RvbPolyError):
    """The covering-set size is not a prime number."""


class ZeroState(RvbPolyError):
    """Operation is undefined on the zero vector."""

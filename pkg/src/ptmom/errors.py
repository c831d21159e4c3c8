"""Exception types raised across the package."""


class PTMomentError(ValueError):
    """Base class for invalid-input errors."""


class NotSquare(PTMomentError):
    pass


class NotHermitian(PTMomentError):
    pass


class NotUnitary(PTMomentError):
    pass


class NotNormalized(PTMomentError):
    pass


class InvalidState(PTMomentError):
    """Density matrix rejected: wrong shape, trace, or a clearly negative eigenvalue."""


class InvalidRank(PTMomentError):
    pass


class InvalidMoments(PTMomentError):
    """Moment vector violates p1 = 1, the purity bounds, or its length contract."""


class WrongDimensions(PTMomentError):
    pass


class IncompatibleDimensions(PTMomentError):
    pass


class ComplexRootsDetected(PTMomentError):
    """Polynomial has roots off the real axis, so no Hermitian spectrum produces it."""


class ConvergenceError(ArithmeticError):
    """Jacobi sweeps did not converge within the sweep budget."""

"""Exception types shared across the package.

Everything raised on purpose by this package derives from CubicLinesError,
except DivisionByZero which aliases the builtin ZeroDivisionError so that
callers can catch either spelling.
"""


class CubicLinesError(Exception):
    """Base class for package errors."""


DivisionByZero = ZeroDivisionError


class PrecisionExhausted(CubicLinesError):
    """More p-adic digits were requested than the value carries."""


class NotSquarefree(CubicLinesError):
    """Operation requires a squarefree polynomial (nonzero discriminant)."""


class DepthExceeded(CubicLinesError):
    """Digit refinement ran past the discriminant-derived depth bound.

    For valid (squarefree / generically smooth) inputs this signals a bug or a
    positive-dimensional solution set, not input pathology.
    """


class InternalInconsistency(CubicLinesError):
    """A cross-check that should hold by construction failed."""


class NotInGeneralPosition(CubicLinesError):
    """Polynomial fails one of the exact general-position flags."""


class ZeroReduction(CubicLinesError):
    """Surface is identically zero modulo p."""


class SingularSurface(CubicLinesError):
    """Line count certificate failed (count outside the admissible set)."""


class SolveFailure(CubicLinesError):
    """Numerical solver failed after the retry budget."""


class NonAdmissibleCount(CubicLinesError):
    """A computed line count is outside the admissible set for its setting."""

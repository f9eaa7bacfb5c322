"""
Exception hierarchy for qjsf.

Every error raised by the library derives from QJSFError so that callers
(the CLI in particular) can separate domain failures from programming errors.
"""

from typing import Optional


class QJSFError(Exception):
    """Base class for all qjsf errors."""
    pass


class ScalarDivisionByZero(QJSFError, ZeroDivisionError):
    """Raised when an exact scalar is divided by exact zero."""
    pass


class IncompatibleKinds(QJSFError, TypeError):
    """Raised when exact and BigFloat scalars are mixed without conversion."""
    pass


class ScalarParseError(QJSFError, ValueError):
    """Raised when a rational or Gaussian-rational literal cannot be parsed."""
    pass


class PartitionParseError(QJSFError, ValueError):
    """Raised when a partition literal is malformed or not weakly decreasing."""
    pass


class NTooSmall(QJSFError, ValueError):
    """Raised when the number of variables is smaller than a partition length."""
    pass


class PoleEncountered(QJSFError, ArithmeticError):
    """Raised when a factor in a denominator position vanishes exactly."""
    pass


class CoincidentPoints(QJSFError, ValueError):
    """Raised when a Vandermonde denominator vanishes."""
    pass


class InadmissibleParameters(QJSFError, ValueError):
    """
    Raised when (q, alpha, beta, gamma, delta) is outside the admissible range.

    Attributes:
        clause: Short name of the violated admissibility clause
    """

    def __init__(self, message: str, clause: Optional[str] = None):
        super().__init__(message)
        self.clause = clause


class ZeroCParameter(QJSFError, ValueError):
    """Raised when a formula needs c != 0 (equivalently gamma != 0)."""
    pass


class NonPositiveWeight(QJSFError, ValueError):
    """Raised when the lattice weight is not strictly positive."""
    pass


class DegenerateMoments(QJSFError, ArithmeticError):
    """Raised when Gram-Schmidt hits a zero norm (too few support points)."""
    pass


class ConfigurationLimitExceeded(QJSFError, RuntimeError):
    """Raised when a brute-force enumeration would exceed the configured guard."""
    pass


class NotReal(QJSFError, ValueError):
    """Raised when a real value is required but the imaginary part is nonzero."""
    pass

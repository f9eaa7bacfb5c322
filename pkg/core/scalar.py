"""
Scalar Module

Coefficient-field arithmetic shared by every other module.

Three kinds of scalars are supported:

* Rational         -- ``fractions.Fraction`` (ints are accepted and promoted)
* GaussianRational -- ``a + b i`` with rational ``a`` and ``b`` (this module)
* BigFloat         -- ``mpmath.mpf`` / ``mpmath.mpc`` at the current ``mp.prec``

Rational and GaussianRational mix freely (Rational is promoted). Mixing an
exact scalar with a BigFloat raises IncompatibleKinds unless the caller
converts explicitly with ``to_bigfloat``.

Usage:
    from core.scalar import parse_scalar, det

    gamma = parse_scalar("1/5+1/7i")
    value = det([[gamma, 1], [2, gamma.conjugate()]])
"""

import re
from enum import Enum
from fractions import Fraction
from typing import Any, List, Sequence, Union

import mpmath
from loguru import logger

from core.errors import IncompatibleKinds, NotReal, ScalarDivisionByZero, ScalarParseError


DEFAULT_PRECISION_BITS = 256


class ScalarKind(str, Enum):
    """Field kind of a scalar value."""

    RATIONAL = "rational"
    GAUSSIAN = "gaussian"
    BIGFLOAT = "bigfloat"


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise IncompatibleKinds(
        f"Expected an exact rational component, got {type(value).__name__}"
    )


class GaussianRational:
    """
    Immutable Gaussian rational ``re + im*i``.

    Compares equal to the corresponding Fraction when ``im == 0`` but never
    changes kind on its own; use ``as_real`` for an explicit conversion.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re: Union[int, Fraction] = 0, im: Union[int, Fraction] = 0):
        object.__setattr__(self, "_re", _as_fraction(re))
        object.__setattr__(self, "_im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    @staticmethod
    def _coerce(other: Any) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        if isinstance(other, (mpmath.mpf, mpmath.mpc, float, complex)):
            raise IncompatibleKinds(
                "Cannot mix GaussianRational with a floating value; "
                "convert explicitly with to_bigfloat()"
            )
        return NotImplemented

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self._re, -self._im)

    def norm(self) -> Fraction:
        """Squared modulus ``re**2 + im**2`` (exact)."""
        return self._re * self._re + self._im * self._im

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self._re - other._re, self._im - other._im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self._re * other._re - self._im * other._im,
            self._re * other._im + self._im * other._re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        denominator = other.norm()
        if denominator == 0:
            raise ScalarDivisionByZero(f"Division of {self} by exact zero")
        numerator = self * other.conjugate()
        return GaussianRational(numerator._re / denominator, numerator._im / denominator)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return GaussianRational(-self._re, -self._im)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return GaussianRational(1) / (self ** (-exponent))
        result = GaussianRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._re == other._re and self._im == other._im
        if isinstance(other, (int, Fraction)):
            return self._im == 0 and self._re == other
        return NotImplemented

    def __hash__(self):
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __bool__(self):
        return self._re != 0 or self._im != 0

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, GaussianRational, mpmath.mpf, mpmath.mpc]


def kind(value: Any) -> ScalarKind:
    """
    Classify a scalar.

    Raises:
        IncompatibleKinds: For Python floats/complex and foreign types
    """
    if isinstance(value, bool):
        raise IncompatibleKinds("bool is not a scalar")
    if isinstance(value, (int, Fraction)):
        return ScalarKind.RATIONAL
    if isinstance(value, GaussianRational):
        return ScalarKind.GAUSSIAN
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return ScalarKind.BIGFLOAT
    raise IncompatibleKinds(f"Unsupported scalar type: {type(value).__name__}")


def is_exact(value: Any) -> bool:
    return kind(value) is not ScalarKind.BIGFLOAT


def _check_pair(a: Any, b: Any) -> None:
    kind_a, kind_b = kind(a), kind(b)
    if (kind_a is ScalarKind.BIGFLOAT) != (kind_b is ScalarKind.BIGFLOAT):
        raise IncompatibleKinds(
            f"Cannot combine {kind_a.value} with {kind_b.value} without explicit conversion"
        )


def add(a: Scalar, b: Scalar) -> Scalar:
    _check_pair(a, b)
    return a + b


def sub(a: Scalar, b: Scalar) -> Scalar:
    _check_pair(a, b)
    return a - b


def mul(a: Scalar, b: Scalar) -> Scalar:
    _check_pair(a, b)
    return a * b


def div(a: Scalar, b: Scalar) -> Scalar:
    """
    Divide two scalars of compatible kinds.

    Raises:
        ScalarDivisionByZero: If ``b`` is an exact zero
        IncompatibleKinds: If exact and BigFloat values are mixed
    """
    _check_pair(a, b)
    if is_exact(b) and b == 0:
        raise ScalarDivisionByZero(f"Division of {format_scalar(a)} by exact zero")
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def to_bigfloat(value: Scalar) -> Union[mpmath.mpf, mpmath.mpc]:
    """Explicit conversion of any scalar to BigFloat at the current precision."""
    value_kind = kind(value)
    if value_kind is ScalarKind.BIGFLOAT:
        return value
    if value_kind is ScalarKind.GAUSSIAN:
        return mpmath.mpc(to_bigfloat(value.re), to_bigfloat(value.im))
    fraction = _as_fraction(value)
    return mpmath.mpf(fraction.numerator) / fraction.denominator


def set_precision(bits: int = DEFAULT_PRECISION_BITS) -> None:
    """Set the working precision (in bits) used by BigFloat arithmetic."""
    if bits < 53:
        raise ValueError(f"Precision must be at least 53 bits, got {bits}")
    mpmath.mp.prec = bits
    logger.debug(f"BigFloat precision set to {bits} bits")


def conj(value: Scalar) -> Scalar:
    if isinstance(value, GaussianRational):
        return value.conjugate()
    if isinstance(value, mpmath.mpc):
        return mpmath.conj(value)
    kind(value)
    return value


def real_part(value: Scalar) -> Scalar:
    if isinstance(value, GaussianRational):
        return value.re
    if isinstance(value, mpmath.mpc):
        return value.real
    kind(value)
    return value


def imag_part(value: Scalar) -> Scalar:
    if isinstance(value, GaussianRational):
        return value.im
    if isinstance(value, mpmath.mpc):
        return value.imag
    if isinstance(value, mpmath.mpf):
        return mpmath.mpf(0)
    kind(value)
    return Fraction(0)


def is_real(value: Scalar) -> bool:
    return imag_part(value) == 0


def as_real(value: Scalar) -> Scalar:
    """
    Explicitly drop a zero imaginary part.

    Raises:
        NotReal: If the imaginary part is nonzero
    """
    if not is_real(value):
        raise NotReal(f"Value {format_scalar(value)} has a nonzero imaginary part")
    real = real_part(value)
    return Fraction(real) if isinstance(real, int) else real


def magnitude(value: Scalar) -> mpmath.mpf:
    """Absolute value as a BigFloat (used by convergence diagnostics)."""
    return abs(to_bigfloat(value))


def det(matrix: Sequence[Sequence[Scalar]]) -> Scalar:
    """
    Determinant of a square matrix.

    Exact kinds use Gaussian elimination over the field with the first nonzero
    pivot; BigFloat uses partial pivoting on the modulus.

    Args:
        matrix: Square array of scalars of one field family

    Returns:
        The determinant (``Fraction(1)`` for the empty matrix)

    Raises:
        ValueError: If the matrix is not square
        IncompatibleKinds: If exact and BigFloat entries are mixed
    """
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise ValueError("det requires a square matrix")
    if size == 0:
        return Fraction(1)

    kinds = {kind(entry) for row in matrix for entry in row}
    if ScalarKind.BIGFLOAT in kinds and len(kinds) > 1:
        raise IncompatibleKinds("Matrix mixes exact and BigFloat entries")

    rows: List[List[Scalar]] = [
        [Fraction(entry) if isinstance(entry, int) else entry for entry in row]
        for row in matrix
    ]
    if ScalarKind.BIGFLOAT in kinds:
        return _det_partial_pivoting(rows)
    return _det_exact(rows)


def _det_exact(rows: List[List[Scalar]]) -> Scalar:
    size = len(rows)
    result: Scalar = Fraction(1)
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot_row is None:
            return result * 0
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            result = -result
        pivot = rows[col][col]
        result = result * pivot
        for r in range(col + 1, size):
            factor = rows[r][col] / pivot
            if factor != 0:
                rows[r] = rows[r][:col] + [
                    a - factor * b for a, b in zip(rows[r][col:], rows[col][col:])
                ]
    return result


def _det_partial_pivoting(rows: List[List[Scalar]]) -> Scalar:
    size = len(rows)
    result = mpmath.mpf(1)
    for col in range(size):
        pivot_row = max(range(col, size), key=lambda r: abs(rows[r][col]))
        if rows[pivot_row][col] == 0:
            return mpmath.mpf(0)
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            result = -result
        pivot = rows[col][col]
        result = result * pivot
        for r in range(col + 1, size):
            factor = rows[r][col] / pivot
            rows[r] = rows[r][:col] + [
                a - factor * b for a, b in zip(rows[r][col:], rows[col][col:])
            ]
    return result


# Literal formats: "p", "p/q", "a/b+c/di", "c/di", "i", "-i"
_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_RATIONAL_RE = re.compile(rf"^{_RATIONAL}$")
_IMAGINARY_RE = re.compile(r"^(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i$")
_GAUSSIAN_RE = re.compile(rf"^(?P<re>{_RATIONAL})(?P<im>[+-](?:\d+(?:/\d+)?)?)i$")


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise ScalarParseError(f"Not a rational literal: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ScalarParseError(f"Zero denominator in literal: {text!r}")


def _parse_imaginary(text: str) -> Fraction:
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return _parse_rational(text)


def parse_scalar(text: str) -> Union[Fraction, GaussianRational]:
    """
    Parse a rational ("p", "p/q") or Gaussian-rational ("a/b+c/di") literal.

    Raises:
        ScalarParseError: On malformed input
    """
    literal = str(text).strip().replace(" ", "")
    if not literal:
        raise ScalarParseError("Empty scalar literal")

    match = _IMAGINARY_RE.match(literal)
    if match:
        return GaussianRational(0, _parse_imaginary(match.group("im")))

    match = _GAUSSIAN_RE.match(literal)
    if match:
        return GaussianRational(
            _parse_rational(match.group("re")),
            _parse_imaginary(match.group("im")),
        )

    return _parse_rational(literal)


def _digits() -> int:
    return max(15, int(mpmath.mp.prec * 0.30103) - 2)


def format_scalar(value: Scalar, digits: int = None) -> str:
    """Render a scalar in the literal format accepted by parse_scalar."""
    digits = digits or _digits()
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return str(value.re)
        sign = "-" if value.im < 0 else "+"
        if value.re == 0:
            return f"{'-' if value.im < 0 else ''}{abs(value.im)}i"
        return f"{value.re}{sign}{abs(value.im)}i"
    if isinstance(value, mpmath.mpc):
        real = mpmath.nstr(value.real, digits)
        sign = "-" if value.imag < 0 else "+"
        return f"{real}{sign}{mpmath.nstr(abs(value.imag), digits)}i"
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, digits)
    if isinstance(value, (int, Fraction)):
        return str(value)
    raise IncompatibleKinds(f"Cannot format {type(value).__name__}")

"""
Q-Series Module

q-Pochhammer symbols (finite index, negative index, diagram index),
Gaussian binomials and the terminating 3phi2 series.

Only finite-index products are evaluated here; infinite products reduce to
finite ones on lattice points and that reduction lives in ``symfun.bigq``.

Usage:
    from fractions import Fraction
    from core.qseries import QContext, poch

    ctx = QContext(Fraction(1, 2))
    poch(Fraction(1, 2), 2, ctx)   # Fraction(3, 8)
"""

from fractions import Fraction
from typing import Dict, List

import mpmath

from core.errors import PoleEncountered
from core.partition import Partition
from core.scalar import Scalar, format_scalar, is_exact, kind, ScalarKind


class QContext:
    """
    Holder for the base q with 0 < q < 1 and a cache of its integer powers.

    Args:
        q: Exact rational (Fraction/int) or real BigFloat

    Raises:
        ValueError: If q is not a real number strictly inside (0, 1)
    """

    def __init__(self, q: Scalar):
        value_kind = kind(q)
        if value_kind is ScalarKind.GAUSSIAN or isinstance(q, mpmath.mpc):
            raise ValueError(f"q must be real, got {format_scalar(q)}")
        if isinstance(q, int):
            q = Fraction(q)
        if not 0 < q < 1:
            raise ValueError(f"q must lie strictly inside (0, 1), got {format_scalar(q)}")
        self.q = q
        self.precision = None if is_exact(q) else mpmath.mp.prec
        self._powers: Dict[int, Scalar] = {0: Fraction(1) if self.is_exact else mpmath.mpf(1)}

    @property
    def is_exact(self) -> bool:
        return is_exact(self.q)

    def power(self, k: int) -> Scalar:
        """q**k for any integer k (cached)."""
        cached = self._powers.get(k)
        if cached is None:
            cached = self.q ** k
            self._powers[k] = cached
        return cached

    def one(self) -> Scalar:
        return self._powers[0]

    def zero(self) -> Scalar:
        return self._powers[0] * 0

    def to_bigfloat(self) -> "QContext":
        if not self.is_exact:
            return self
        return QContext(mpmath.mpf(self.q.numerator) / self.q.denominator)

    def _key(self):
        # exact and BigFloat contexts never compare equal, even for the same q
        return (self.is_exact, self.precision, self.q)

    def __eq__(self, other):
        return isinstance(other, QContext) and self._key() == other._key()

    def __hash__(self):
        return hash(("QContext",) + self._key())

    def __repr__(self):
        return f"QContext(q={format_scalar(self.q)})"


def poch(z: Scalar, n: int, ctx: QContext) -> Scalar:
    """
    (z;q)_n for any integer n.

    For n < 0 this is 1 / prod_{k=1..-n} (1 - z q^{-k}).

    Raises:
        PoleEncountered: If n < 0 and a denominator factor vanishes
    """
    if n >= 0:
        result = ctx.power(0)
        for i in range(n):
            result = result * (1 - z * ctx.power(i))
        return result

    denominator = ctx.power(0)
    for k in range(1, -n + 1):
        factor = 1 - z * ctx.power(-k)
        if factor == 0:
            raise PoleEncountered(
                f"(z;q)_{n} has a vanishing factor at z={format_scalar(z)}"
            )
        denominator = denominator * factor
    return 1 / denominator


def recip_qpoch(r: int, ctx: QContext) -> Scalar:
    """1/(q;q)_r, defined as exactly 0 for r < 0."""
    if r < 0:
        return ctx.zero()
    return 1 / poch(ctx.q, r, ctx)


def poch_diagram(z: Scalar, lam: Partition, ctx: QContext) -> Scalar:
    """(z;q)_lambda = product over boxes (i, j) of (1 - z q^{j-i})."""
    result = ctx.power(0)
    for i, j in lam.boxes():
        result = result * (1 - z * ctx.power(j - i))
    return result


def poch_diagram_rows(z: Scalar, lam: Partition, ctx: QContext) -> Scalar:
    """Row form of the diagram Pochhammer: prod_i (z q^{1-i};q)_{lambda_i}."""
    result = ctx.power(0)
    for i, part in enumerate(lam.parts, start=1):
        result = result * poch(z * ctx.power(1 - i), part, ctx)
    return result


def qbinomial(m: int, n: int, ctx: QContext) -> Scalar:
    """Gaussian binomial (q;q)_m / ((q;q)_n (q;q)_{m-n}); 0 outside 0 <= n <= m."""
    if n < 0 or n > m:
        return ctx.zero()
    q = ctx.q
    return poch(q, m, ctx) / (poch(q, n, ctx) * poch(q, m - n, ctx))


def phi32_coefficients(ell: int, top2: Scalar, bot1: Scalar, bot2: Scalar,
                       ctx: QContext) -> List[Scalar]:
    """
    Term coefficients of the terminating 3phi2 without the (top3;q)_k factor.

    Term k is (q^-ell;q)_k (top2;q)_k / ((bot1;q)_k (bot2;q)_k (q;q)_k) * q^k
    for k = 0..ell.

    Raises:
        PoleEncountered: If a denominator Pochhammer vanishes for k <= ell
    """
    if ell < 0:
        raise ValueError(f"ell must be non-negative, got {ell}")
    q = ctx.q
    coefficients: List[Scalar] = []
    for k in range(ell + 1):
        denominator = poch(bot1, k, ctx) * poch(bot2, k, ctx) * poch(q, k, ctx)
        if denominator == 0:
            raise PoleEncountered(
                f"3phi2 denominator vanishes at k={k} "
                f"(bot1={format_scalar(bot1)}, bot2={format_scalar(bot2)})"
            )
        numerator = poch(ctx.power(-ell), k, ctx) * poch(top2, k, ctx) * ctx.power(k)
        coefficients.append(numerator / denominator)
    return coefficients


def phi32_terminating(ell: int, top2: Scalar, top3: Scalar, bot1: Scalar, bot2: Scalar,
                      ctx: QContext) -> Scalar:
    """
    Terminating 3phi2 [q^-ell, top2, top3; bot1, bot2 | q; q].

    Raises:
        PoleEncountered: If a denominator Pochhammer vanishes for k <= ell
    """
    coefficients = phi32_coefficients(ell, top2, bot1, bot2, ctx)
    total = 0
    for k, coefficient in enumerate(coefficients):
        total = total + coefficient * poch(top3, k, ctx)
    return total

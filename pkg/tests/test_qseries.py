"""
q-series helper tests: Pochhammer symbols (including negative lengths and
diagram forms), Gaussian binomials and the terminating 3phi2.
"""

from fractions import Fraction

import mpmath
import pytest
from loguru import logger

from core.base_test import BaseTest
from core.errors import PoleEncountered
from core.partition import Partition, enumerate_partitions
from core.qseries import (
    QContext,
    phi32_coefficients,
    phi32_terminating,
    poch,
    poch_diagram,
    poch_diagram_rows,
    qbinomial,
    recip_qpoch,
)
from core.scalar import GaussianRational, to_bigfloat


HALF = QContext(Fraction(1, 2))


@pytest.mark.exact
class TestQContext(BaseTest):

    @pytest.mark.parametrize("q", [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 2)])
    def test_q_outside_unit_interval(self, q):
        with pytest.raises(ValueError):
            QContext(q)

    def test_complex_q_rejected(self):
        with pytest.raises(ValueError):
            QContext(GaussianRational(Fraction(1, 2), 1))

    def test_powers(self):
        assert HALF.power(3) == Fraction(1, 8)
        assert HALF.power(-2) == 4
        assert HALF.one() == 1 and HALF.zero() == 0
        assert isinstance(HALF.one(), Fraction)

    @pytest.mark.float_mode
    def test_to_bigfloat(self, bigfloat_precision):
        ctx = HALF.to_bigfloat()
        assert not ctx.is_exact
        assert ctx.q == mpmath.mpf(1) / 2
        assert isinstance(ctx.one(), mpmath.mpf)

    @pytest.mark.float_mode
    def test_exact_and_bigfloat_contexts_differ(self, bigfloat_precision):
        exact = QContext(Fraction(1, 2))
        floating = exact.to_bigfloat()
        assert exact == QContext(Fraction(1, 2)) and hash(exact) == hash(QContext(Fraction(1, 2)))
        assert exact != floating, "an exact context must not stand in for a BigFloat one"
        assert floating.precision == bigfloat_precision
        mpmath.mp.prec = 53
        assert QContext(mpmath.mpf(1) / 2) != floating, "contexts at different precisions are distinct"


@pytest.mark.exact
class TestPochhammer(BaseTest):

    def test_positive_length(self):
        assert poch(Fraction(1, 2), 2, HALF) == Fraction(3, 8)
        assert poch(Fraction(5), 0, HALF) == 1

    def test_negative_length(self):
        # (z;q)_{-1} = 1 / (1 - z/q)
        assert poch(Fraction(1, 8), -1, HALF) == Fraction(4, 3)

    def test_negative_length_splits(self, rng):
        for _ in range(10):
            z = self.random_rational(rng, nonzero=True)
            m, n = rng.randint(0, 4), rng.randint(0, 4)
            try:
                expected = poch(z, m, HALF) * poch(z * HALF.power(m), -n, HALF)
                actual = poch(z, m - n, HALF)
            except PoleEncountered:
                continue
            logger.debug(f"(z;q)_{m}(zq^{m};q)_-{n} at z={z}")
            assert actual == expected, f"(z;q)_{{m-n}} split failed at z={z}, m={m}, n={n}"

    def test_negative_length_pole(self):
        with pytest.raises(PoleEncountered):
            poch(Fraction(1, 2), -1, HALF)

    def test_reciprocal(self):
        assert recip_qpoch(-1, HALF) == 0
        assert recip_qpoch(0, HALF) == 1
        assert recip_qpoch(2, HALF) == 1 / (Fraction(1, 2) * Fraction(3, 4))

    def test_diagram_forms_agree(self):
        ctx = QContext(Fraction(1, 3))
        z = GaussianRational(Fraction(1, 5), Fraction(1, 7))
        for lam in enumerate_partitions(5):
            assert poch_diagram(z, lam, ctx) == poch_diagram_rows(z, lam, ctx), \
                f"diagram and row forms differ for {lam}"

    def test_single_row_diagram(self):
        z = Fraction(2, 3)
        assert poch_diagram(z, Partition((3,)), HALF) == poch(z, 3, HALF)


@pytest.mark.exact
class TestGaussianBinomial(BaseTest):

    def test_known_value(self):
        # [4 choose 2]_q = 1 + q + 2q^2 + q^3 + q^4
        assert qbinomial(4, 2, HALF) == Fraction(35, 16)

    def test_out_of_range(self):
        assert qbinomial(3, 4, HALF) == 0
        assert qbinomial(3, -1, HALF) == 0

    def test_pascal_rule(self):
        ctx = QContext(Fraction(2, 5))
        for m in range(1, 7):
            for n in range(1, m):
                left = qbinomial(m, n, ctx)
                right = qbinomial(m - 1, n - 1, ctx) + ctx.power(n) * qbinomial(m - 1, n, ctx)
                assert left == right, f"q-Pascal fails at ({m}, {n})"


class TestTerminatingPhi32(BaseTest):

    @pytest.mark.exact
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_summation_formula(self, n):
        """Balanced terminating 3phi2 equals its closed-form product."""
        q = Fraction(1, 2)
        ctx = QContext(q)
        a, b, c = Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)
        bot2 = a * b * ctx.power(1 - n) / c
        value = phi32_terminating(n, a, b, c, bot2, ctx)
        expected = poch(c / a, n, ctx) * poch(c / b, n, ctx) / (poch(c, n, ctx) * poch(c / (a * b), n, ctx))
        logger.info(f"3phi2 with n={n}: {value}")
        assert value == expected, f"3phi2 = {value}, closed form = {expected}"

    @pytest.mark.exact
    def test_coefficient_count(self):
        coefficients = phi32_coefficients(3, Fraction(1, 3), Fraction(1, 7), Fraction(1, 11), HALF)
        assert len(coefficients) == 4
        assert coefficients[0] == 1

    def test_denominator_pole(self):
        with pytest.raises(PoleEncountered):
            phi32_terminating(2, Fraction(1, 3), Fraction(1, 5), Fraction(2), Fraction(1, 7), HALF)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            phi32_coefficients(-1, Fraction(1), Fraction(1), Fraction(1), HALF)

    @pytest.mark.float_mode
    def test_bigfloat_matches_exact(self, bigfloat_precision):
        args = (3, Fraction(1, 3), Fraction(1, 5), Fraction(1, 7), Fraction(8, 15))
        exact = phi32_terminating(*args, HALF)
        floating = phi32_terminating(
            args[0], *(to_bigfloat(x) for x in args[1:]), HALF.to_bigfloat()
        )
        assert abs(floating - to_bigfloat(exact)) < mpmath.mpf(10) ** -60

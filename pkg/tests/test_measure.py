"""
Measure tests: truncated lattices, configuration enumeration, exact
brute-force / Andreief agreement, orthogonality in BigFloat, Schur moments
and the exceptional concentration diagnostic.
"""

from fractions import Fraction

import mpmath
import pytest
from loguru import logger

from core.base_test import BaseTest
from core.errors import ConfigurationLimitExceeded, InadmissibleParameters, NTooSmall
from core.partition import EMPTY, Partition, enumerate_partitions
from core.scalar import to_bigfloat
from symfun.bigq import Series, h_univariate_norm, params_from_mapping
from symfun.interp import schur_eval
from symfun.measure import (
    build_lattice,
    concentration_diagnostic,
    config_weight,
    cross_moments,
    enumerate_configurations,
    expectation,
    gram_andreief,
    gram_bruteforce,
    mean_phi_check,
    norm_convergence_study,
    normalize,
    schur_moment,
    schur_moment_study,
)


def _profile(loader, name):
    return params_from_mapping(loader.get_param_profile(name))


class TestTruncatedLattice(BaseTest):

    def test_size_and_order(self):
        lat = build_lattice(_profile(self.config_loader, "principal_small"), K=4)
        assert lat.size == 8
        assert list(lat.points) == sorted(lat.points), "lattice points are ascending"

    @pytest.mark.float_mode
    def test_default_truncation_meets_tolerance(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_small")
        lat = build_lattice(params, tail_tol=1e-14, N=1)
        logger.info(f"Default truncation K={lat.K}, tail ratio {mpmath.nstr(lat.tail_ratio(1), 6)}")
        assert lat.K < self.config_loader.get("max_lattice_index")
        assert lat.tail_ratio(1) < mpmath.mpf("1e-14")
        assert lat.tail_bound(1) > 0

    @pytest.mark.float_mode
    def test_tail_ratio_shrinks_with_K(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit")
        ratios = [build_lattice(params, K=K).tail_ratio(2) for K in (10, 20, 30)]
        assert ratios[0] > ratios[1] > ratios[2]

    def test_exceptional_weights_do_not_depend_on_N(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=3)
        assert lat.weights(2) is lat.weights(5)


@pytest.mark.exact
class TestConfigurations(BaseTest):

    def test_count_and_order(self):
        lat = build_lattice(_profile(self.config_loader, "principal_small"), K=3)
        configs = list(enumerate_configurations(lat, 2))
        assert len(configs) == 15, "C(6, 2) configurations"
        for X in configs:
            assert X.points[0] > X.points[1], "configuration points are stored decreasing"
            assert tuple(lat.points[i] for i in X.indices) == X.points

    def test_guard(self):
        lat = build_lattice(_profile(self.config_loader, "principal_small"), K=5)
        with pytest.raises(ConfigurationLimitExceeded):
            list(enumerate_configurations(lat, 5, max_configs=100))

    def test_normalization_and_expectation(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=3)
        assert normalize(lat, 0) == 1
        assert normalize(lat, 1) == sum(lat.weights(1))
        assert expectation(lambda points: Fraction(1), 2, lat) == 1

    def test_config_weight_size_mismatch(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=3)
        X = next(enumerate_configurations(lat, 2))
        with pytest.raises(ValueError):
            config_weight(X, 3, lat)

    def test_cross_moments(self):
        rows = [[Fraction(1), Fraction(2)]]
        columns = [[Fraction(3), Fraction(4)], [Fraction(1), Fraction(1)]]
        assert cross_moments(rows, columns, [Fraction(1), Fraction(1, 2)]) == [[Fraction(7), Fraction(2)]]


class TestGram(BaseTest):

    @pytest.mark.exact
    @pytest.mark.series("principal", "complementary", "exceptional")
    def test_andreief_equals_bruteforce(self, params):
        lat = build_lattice(params, K=3)
        lambdas = [lam for lam in enumerate_partitions(2) if lam.length <= 2]
        brute = gram_bruteforce(lambdas, 2, lat)
        fast = gram_andreief(lambdas, 2, lat)
        logger.info(f"{params.series.value}: comparing {len(lambdas)}x{len(lambdas)} Gram matrices exactly")
        assert brute.entries == fast.entries, "Andreief reduction must equal the brute-force sum exactly"
        assert brute.is_symmetric() and fast.is_symmetric()
        assert all(value > 0 for value in fast.diagonal())
        assert brute.method == "bruteforce" and fast.method == "andreief"

    @pytest.mark.exact
    @pytest.mark.series("exceptional")
    def test_exceptional_gram_is_diagonal(self, params):
        lat = build_lattice(params, K=3)
        gram = gram_andreief(enumerate_partitions(2), 2, lat)
        assert gram.max_relative_offdiag() == 0
        assert gram.entry(EMPTY, EMPTY) == 1
        assert mean_phi_check(Partition((1,)), 2, lat) == 0
        assert mean_phi_check(EMPTY, 2, lat) == 1

    @pytest.mark.float_mode
    def test_orthogonality_bigfloat(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit").to_bigfloat()
        lat = build_lattice(params, K=50)
        gram = gram_andreief(enumerate_partitions(2), 2, lat)
        worst = gram.max_relative_offdiag()
        logger.info(f"Max relative off-diagonal at K=50: {mpmath.nstr(worst, 6)}")
        assert worst < mpmath.mpf("1e-8"), f"Off-diagonal mass {worst} too large"
        assert all(value > 0 for value in gram.diagonal())

    @pytest.mark.float_mode
    def test_offdiagonal_within_tail_bound(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit").to_bigfloat()
        lambdas = [EMPTY, Partition((1,))]
        worst = {}
        for K in (16, 20):
            lat = build_lattice(params, K=K)
            worst[K] = gram_andreief(lambdas, 1, lat).max_relative_offdiag()
            bound = 10 * lat.tail_bound(1)
            logger.info(f"K={K}: off-diagonal {mpmath.nstr(worst[K], 6)}, 10 x tail bound {mpmath.nstr(bound, 6)}")
            assert worst[K] <= bound, f"K={K}: off-diagonal {worst[K]} above 10 x tail bound {bound}"
        assert worst[20] < worst[16], "off-diagonal mass must shrink when K grows by 4"

    @pytest.mark.float_mode
    def test_univariate_norm_matches_lattice_sum(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit")
        lat = build_lattice(params.to_bigfloat(), K=40)
        gram = gram_andreief([EMPTY, Partition((1,))], 1, lat)
        # Gram entries are relative to the total mass, like h
        summed = gram.entry(Partition((1,)), Partition((1,))) / gram.entry(EMPTY, EMPTY)
        expected = to_bigfloat(h_univariate_norm(1, 1, params))
        error = abs(summed - expected) / abs(expected)
        logger.info(f"h_1 = {mpmath.nstr(expected, 12)}, lattice sum {mpmath.nstr(summed, 12)}")
        assert error < mpmath.mpf("1e-8"), f"h_1 differs from the lattice sum by {error}"

    def test_bruteforce_caps(self):
        params = _profile(self.config_loader, "exceptional")
        with pytest.raises(ConfigurationLimitExceeded):
            gram_bruteforce([EMPTY], 2, build_lattice(params, K=13))
        with pytest.raises(ConfigurationLimitExceeded):
            gram_bruteforce([EMPTY], 5, build_lattice(params, K=3))

    def test_partition_longer_than_N(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=3)
        with pytest.raises(NTooSmall):
            gram_andreief([Partition((1, 1, 1))], 2, lat)

    def test_rows(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=3)
        gram = gram_andreief([EMPTY, Partition((1,))], 1, lat)
        rows = gram.rows()
        assert len(rows) == 4
        assert set(rows[0]) == {"lambda", "mu", "value_re", "value_im", "tail_bound"}
        assert rows[0]["lambda"] == "-" and rows[0]["value_re"] == "1"
        assert gram.to_json()["method"] == "andreief"


class TestMoments(BaseTest):

    @pytest.mark.exact
    def test_schur_moment_matches_bruteforce(self):
        lat = build_lattice(_profile(self.config_loader, "principal_small"), K=3)
        for nu in (EMPTY, Partition((1,)), Partition((2,)), Partition((1, 1))):
            brute = expectation(lambda points: schur_eval(nu, 2, points), 2, lat)
            assert schur_moment(nu, 2, lat) == brute, f"<M_2, S_{nu}> differs from brute force"
        assert schur_moment(Partition((1, 1, 1)), 2, lat) == 0

    @pytest.mark.float_mode
    def test_schur_moment_study_rows(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit").to_bigfloat()
        rows = schur_moment_study(Partition((1,)), [2, 3, 4], lambda N: build_lattice(params, K=30))
        assert [row["N"] for row in rows] == [2, 3, 4]
        assert rows[0]["difference"] is None and rows[1]["difference"] is not None

    @pytest.mark.float_mode
    def test_norm_study(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit")
        rows = norm_convergence_study(Partition((1,)), range(6, 11), params)
        errors = [row["error"] for row in rows]
        logger.info(f"Relative norm errors: {[mpmath.nstr(e, 6) for e in errors]}")
        assert errors == sorted(errors, reverse=True), "finite-N norms approach the limit monotonically"
        assert errors[-1] < errors[0]

    @pytest.mark.float_mode
    def test_norm_study_with_gram(self, bigfloat_precision):
        params = _profile(self.config_loader, "principal_unit")
        fparams = params.to_bigfloat()
        rows = norm_convergence_study(Partition((1,)), [2, 3], params, lambda N: build_lattice(fparams, K=40))
        assert all(row["gram_diagonal"] > 0 for row in rows)


@pytest.mark.exact
class TestConcentration(BaseTest):

    def test_rows(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=4)
        rows = concentration_diagnostic([1, 2, 3], lat)
        assert [row["N"] for row in rows] == [1, 2, 3]
        for row in rows:
            logger.info(f"N={row['N']}: abs_gap={row['abs_gap']}, argmax={row['argmax']}")
            assert row["abs_gap"] >= 0, "no configuration beats the outermost packing in total modulus"
            assert row["gap"] >= 0
            assert len(row["argmax"]) == row["N"]

    def test_target_is_outermost(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=4)
        row = concentration_diagnostic([2], lat)[0]
        # the two outermost points are -1/2 and 1/2
        assert row["target_sum"] == 0

    def test_full_lattice_has_no_gap(self):
        lat = build_lattice(_profile(self.config_loader, "exceptional"), K=3)
        row = concentration_diagnostic([lat.size], lat)[0]
        # one configuration: every lattice point
        assert row["gap"] == 0 and row["abs_gap"] == 0
        assert row["argmax_is_target"]

    def test_requires_exceptional(self):
        lat = build_lattice(_profile(self.config_loader, "principal_small"), K=3)
        with pytest.raises(InadmissibleParameters) as excinfo:
            concentration_diagnostic([2], lat)
        assert excinfo.value.clause == "exceptional: gamma = delta = 0"

    def test_exceptional_series(self):
        assert _profile(self.config_loader, "exceptional").series is Series.EXCEPTIONAL

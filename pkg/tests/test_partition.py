"""
Partition combinatorics tests: statistics against golden values,
enumeration counts, reverse tableaux and interpolation nodes.
"""

from fractions import Fraction

import pytest
from loguru import logger

from core.base_test import BaseTest
from core.errors import NTooSmall, PartitionParseError
from core.partition import (
    EMPTY,
    Partition,
    conjugate,
    contains,
    doubled,
    enumerate_partitions,
    enumerate_reverse_tableaux,
    format_partition,
    hook_lengths,
    n_stat,
    node_vector,
    parse_partition,
    partitions_of,
    subpartitions,
)
from symfun.interp import schur_jacobi_trudi
from utils.data_loader import case_ids, load_test_data


PARTITION_CASES = load_test_data("test_data/partitions.yaml")
TABLEAU_CASES = load_test_data("test_data/tableaux.json")


@pytest.mark.golden
class TestPartitionStatistics(BaseTest):
    """Conjugate, n(lambda) and hook lengths against test_data/partitions.yaml."""

    @pytest.mark.parametrize("case", PARTITION_CASES, ids=case_ids(PARTITION_CASES))
    def test_statistics(self, case):
        lam = parse_partition(case["partition"])
        logger.info(f"Checking statistics of {format_partition(lam)}")

        assert conjugate(lam) == parse_partition(case["conjugate"]), \
            f"conjugate({lam}) = {conjugate(lam)}, expected {case['conjugate']}"
        assert n_stat(lam) == case["n_stat"], f"n({lam}) = {n_stat(lam)}, expected {case['n_stat']}"
        hooks = sorted(hook_lengths(lam).values(), reverse=True)
        assert hooks == case["hooks"], f"hooks of {lam} = {hooks}, expected {case['hooks']}"
        logger.info(f"✓ {format_partition(lam)} statistics match")

    def test_conjugate_is_involution(self):
        for lam in enumerate_partitions(7):
            assert conjugate(conjugate(lam)) == lam, f"conjugate is not an involution at {lam}"
            assert conjugate(lam).size == lam.size

    def test_doubled(self):
        assert doubled(Partition((2, 1))) == Partition((4, 4, 2, 2))
        assert doubled(EMPTY) == EMPTY


class TestPartitionParsing(BaseTest):
    """Literal handling and normalization."""

    def test_trailing_zeros_dropped(self):
        assert Partition((2, 1, 0, 0)) == Partition((2, 1))
        assert Partition((0,)) == EMPTY

    @pytest.mark.parametrize("literal", ["-", "", "0"])
    def test_empty_literals(self, literal):
        assert parse_partition(literal) == EMPTY

    @pytest.mark.parametrize("literal", ["1,2", "2,-1", "a,b", "2;1"])
    def test_malformed_raises(self, literal):
        with pytest.raises(PartitionParseError):
            parse_partition(literal)

    def test_format(self):
        assert format_partition(Partition((3, 1, 1))) == "3,1,1"
        assert format_partition(EMPTY) == "-"
        assert parse_partition(format_partition(Partition((4, 2)))) == Partition((4, 2))


class TestEnumeration(BaseTest):
    """Counts of partitions and subpartitions."""

    @pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (4, 5), (5, 7), (8, 22)])
    def test_partitions_of(self, n, count):
        found = partitions_of(n)
        assert len(found) == count, f"p({n}) = {len(found)}, expected {count}"
        assert all(lam.size == n for lam in found)

    def test_enumerate_up_to_five(self):
        found = enumerate_partitions(5)
        assert len(found) == 19, f"Expected 19 partitions of size <= 5, got {len(found)}"
        assert found[0] == EMPTY
        sizes = [lam.size for lam in found]
        assert sizes == sorted(sizes), "enumeration must be graded"

    def test_subpartitions(self):
        found = subpartitions(Partition((2, 1)))
        expected = [EMPTY, Partition((1,)), Partition((2,)), Partition((1, 1)), Partition((2, 1))]
        assert found == expected, f"subpartitions((2,1)) = {[str(p) for p in found]}"
        for lam in enumerate_partitions(5):
            assert all(contains(lam, nu) for nu in subpartitions(lam))


@pytest.mark.golden
class TestReverseTableaux(BaseTest):
    """Reverse tableaux counts against test_data/tableaux.json."""

    @pytest.mark.parametrize("case", TABLEAU_CASES, ids=case_ids(TABLEAU_CASES))
    def test_count(self, case):
        shape = parse_partition(case["shape"])
        tableaux = enumerate_reverse_tableaux(shape, case["N"])
        logger.info(f"{len(tableaux)} reverse tableaux of shape {format_partition(shape)} with N={case['N']}")
        assert len(tableaux) == case["count"], \
            f"Expected {case['count']} tableaux, got {len(tableaux)}"
        assert all(t.is_reverse() for t in tableaux), "every enumerated filling must be reverse"
        assert all(1 <= value <= case["N"] for t in tableaux for _, value in t.items())

    def test_count_is_schur_at_ones(self):
        for mu in enumerate_partitions(5):
            for n in range(mu.length, 5):
                hooks = hook_lengths(mu)
                # hook-content formula for S_mu(1, ..., 1)
                expected = Fraction(1)
                for (i, j), hook in hooks.items():
                    expected *= Fraction(n + j - i, hook)
                count = len(enumerate_reverse_tableaux(mu, n))
                assert count == expected, f"{count} reverse tableaux of shape {mu} in {n} letters, S_mu(1^{n}) = {expected}"
                assert count == schur_jacobi_trudi(mu, [1] * n)

    def test_tableaux_are_distinct(self):
        tableaux = enumerate_reverse_tableaux(Partition((2, 2)), 4)
        assert len(set(tableaux)) == len(tableaux) == 20


@pytest.mark.exact
class TestNodes(BaseTest):
    """Interpolation nodes X_N(lambda)."""

    def test_node_vector(self):
        q = Fraction(1, 2)
        nodes = node_vector(Partition((2, 1)), 3, q)
        assert nodes == (Fraction(4), Fraction(1), Fraction(1, 4)), f"Unexpected nodes {nodes}"

    def test_empty_partition_nodes_are_geometric(self):
        q = Fraction(1, 3)
        assert node_vector(EMPTY, 4, q) == tuple(q ** i for i in range(4))

    def test_infinite_rule_agrees_with_prefix(self):
        q = Fraction(2, 5)
        lam = Partition((3, 1))
        rule = node_vector(lam, None, q)
        assert rule.prefix(5) == node_vector(lam, 5, q)
        assert rule(7) == q ** 6, "coordinates past the length follow q^{i-1}"

    def test_too_few_coordinates(self):
        with pytest.raises(NTooSmall):
            node_vector(Partition((1, 1, 1)), 2, Fraction(1, 2))

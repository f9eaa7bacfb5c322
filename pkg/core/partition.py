"""
Partition Module

Partitions (Young diagrams), their statistics, reverse tableaux and the
interpolation nodes X(lambda).

Boxes are indexed (row i, column j), both 1-based. Enumeration orders are
deterministic: graded by size, then reverse-lexicographic inside one size,
so ``enumerate_partitions(2)`` is ``[-, 1, 2, 1,1]``.

Usage:
    from core.partition import Partition, parse_partition

    lam = parse_partition("4,2,1")
    lam.conjugate()          # Partition((3, 2, 1, 1))
    lam.hook_lengths()[(1, 1)]
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from core.errors import NTooSmall, PartitionParseError


Box = Tuple[int, int]


@dataclass(frozen=True)
class Partition:
    """
    Weakly decreasing sequence of positive integers.

    Trailing zeros passed to the constructor are dropped, so
    ``Partition((2, 1, 0)) == Partition((2, 1))``.
    """

    parts: Tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p < 0 for p in parts):
            raise PartitionParseError(f"Negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionParseError(f"Parts are not weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def part(self, i: int) -> int:
        """1-based part access; returns 0 past the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def padded(self, n: int) -> Tuple[int, ...]:
        return self.parts + (0,) * max(0, n - len(self.parts))

    def is_empty(self) -> bool:
        return not self.parts

    def boxes(self) -> List[Box]:
        return [(i, j) for i, row in enumerate(self.parts, start=1) for j in range(1, row + 1)]

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def n_stat(self) -> int:
        return n_stat(self)

    def contains(self, other: "Partition") -> bool:
        return contains(self, other)

    def hook_lengths(self) -> Dict[Box, int]:
        return hook_lengths(self)

    def doubled(self) -> "Partition":
        return doubled(self)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Graded, then reverse-lexicographic."""
        return (self.size, tuple(-p for p in self.parts))

    def __str__(self):
        return format_partition(self)


EMPTY = Partition()


def conjugate(lam: Partition) -> Partition:
    """Transpose of the Young diagram."""
    if lam.is_empty():
        return EMPTY
    return Partition(tuple(
        sum(1 for p in lam.parts if p >= j) for j in range(1, lam.parts[0] + 1)
    ))


def n_stat(lam: Partition) -> int:
    """n(lambda) = sum of (i-1) * lambda_i."""
    return sum(i * p for i, p in enumerate(lam.parts))


def contains(lam: Partition, mu: Partition) -> bool:
    """True iff mu_i <= lambda_i for every i."""
    if mu.length > lam.length:
        return False
    return all(m <= l for m, l in zip(mu.parts, lam.parts))


def hook_lengths(lam: Partition) -> Dict[Box, int]:
    transpose = conjugate(lam)
    return {
        (i, j): lam.part(i) - j + transpose.part(j) - i + 1
        for i, j in lam.boxes()
    }


def doubled(lam: Partition) -> Partition:
    """Each box replaced by a 2x2 square: (2l1, 2l1, 2l2, 2l2, ...)."""
    return Partition(tuple(2 * p for p in lam.parts for _ in range(2)))


def partitions_of(n: int) -> List[Partition]:
    """All partitions of exactly n, reverse-lexicographic."""
    if n < 0:
        return []

    def _generate(remaining: int, max_part: int) -> Iterator[Tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, max_part), 0, -1):
            for rest in _generate(remaining - first, first):
                yield (first,) + rest

    return [Partition(parts) for parts in _generate(n, n)]


def enumerate_partitions(max_size: int) -> List[Partition]:
    """All partitions with size <= max_size, graded then reverse-lex."""
    if max_size < 0:
        raise ValueError(f"max_size must be non-negative, got {max_size}")
    result: List[Partition] = []
    for n in range(max_size + 1):
        result.extend(partitions_of(n))
    return result


def subpartitions(lam: Partition) -> List[Partition]:
    """All nu contained in lambda, graded then reverse-lex."""
    found: List[Tuple[int, ...]] = []

    def _generate(row: int, upper: int, prefix: Tuple[int, ...]) -> None:
        if row > lam.length:
            found.append(prefix)
            return
        for value in range(min(upper, lam.part(row)), -1, -1):
            _generate(row + 1, value, prefix + (value,))

    _generate(1, lam.part(1), ())
    return sorted({Partition(p) for p in found}, key=Partition.sort_key)


@dataclass(frozen=True)
class Tableau:
    """
    Filling of a shape with positive integers.

    ``rows[i-1][j-1]`` is the entry in box (i, j). Reverse tableaux decrease
    weakly along rows and strictly down columns.
    """

    shape: Partition
    rows: Tuple[Tuple[int, ...], ...]

    def entry(self, i: int, j: int) -> int:
        return self.rows[i - 1][j - 1]

    def items(self) -> Iterator[Tuple[Box, int]]:
        for i, row in enumerate(self.rows, start=1):
            for j, value in enumerate(row, start=1):
                yield (i, j), value

    def is_reverse(self) -> bool:
        for (i, j), value in self.items():
            if j > 1 and value > self.entry(i, j - 1):
                return False
            if i > 1 and value >= self.entry(i - 1, j):
                return False
        return True


def enumerate_reverse_tableaux(mu: Partition, N: int) -> List[Tableau]:
    """
    All reverse tableaux of shape mu with entries in {1..N}.

    Returns an empty list when N < length(mu).
    """
    if N < mu.length:
        return []
    if mu.is_empty():
        return [Tableau(mu, ())]

    transpose = conjugate(mu)
    boxes = mu.boxes()
    filling: Dict[Box, int] = {}
    result: List[Tableau] = []

    def _fill(index: int) -> None:
        if index == len(boxes):
            rows = tuple(
                tuple(filling[(i, j)] for j in range(1, mu.part(i) + 1))
                for i in range(1, mu.length + 1)
            )
            result.append(Tableau(mu, rows))
            return
        i, j = boxes[index]
        upper = filling[(i, j - 1)] if j > 1 else N
        if i > 1:
            upper = min(upper, filling[(i - 1, j)] - 1)
        # room for the strictly smaller entries further down this column
        lower = transpose.part(j) - i + 1
        for value in range(upper, lower - 1, -1):
            filling[(i, j)] = value
            _fill(index + 1)
        filling.pop((i, j), None)

    _fill(0)
    return result


class NodeRule:
    """
    Lazily evaluated infinite node vector X(lambda) = (q^{-l1}, q^{-l2+1}, ...).

    Coordinates past the length of lambda form the geometric tail q^{i-1}.
    """

    def __init__(self, lam: Partition, q):
        self.lam = lam
        self.q = q

    def __call__(self, i: int):
        return self.q ** (i - 1 - self.lam.part(i))

    def prefix(self, n: int) -> Tuple:
        return tuple(self(i) for i in range(1, n + 1))


def node_vector(lam: Partition, N: Optional[int], q) -> Union[Tuple, NodeRule]:
    """
    Interpolation nodes X_N(lambda).

    Args:
        lam: Partition
        N: Number of coordinates, or None for the infinite rule
        q: Exact rational (or BigFloat) base

    Returns:
        Tuple of N coordinates, or a NodeRule when N is None

    Raises:
        NTooSmall: If N < length(lam)
    """
    rule = NodeRule(lam, q)
    if N is None:
        return rule
    if N < lam.length:
        raise NTooSmall(f"N={N} is smaller than the length of {format_partition(lam)}")
    return rule.prefix(N)


def parse_partition(text: Union[str, Sequence[int], Partition]) -> Partition:
    """
    Parse "2,1" (or "-" / "" for the empty partition).

    Raises:
        PartitionParseError: On malformed or non-decreasing input
    """
    if isinstance(text, Partition):
        return text
    if not isinstance(text, str):
        return Partition(tuple(text))

    literal = text.strip()
    if literal in ("", "-", "0"):
        return EMPTY
    try:
        parts = tuple(int(token) for token in literal.split(","))
    except ValueError:
        raise PartitionParseError(f"Malformed partition literal: {text!r}")
    return Partition(parts)


def format_partition(lam: Partition) -> str:
    return ",".join(str(p) for p in lam.parts) if lam.parts else "-"


PartitionLike = Union[Partition, str, Sequence[int]]

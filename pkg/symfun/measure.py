"""
Measure Module

Finite-N q-beta measures M_N on N-point configurations of a truncated lattice.

M_N(X) is proportional to prod_i W(x_i; alpha, beta, gamma q^{1-N}, delta q^{1-N})
times the squared Vandermonde of X. Everything here is a finite sum over the
C(2K, N) configurations of a TruncatedLattice, either by brute force or through
the Andreief (Cauchy-Binet) reduction to an N x N determinant of cross-moments.

Usage:
    from symfun.measure import build_lattice, gram_andreief

    lat = build_lattice(params, K=6)
    gram = gram_andreief(enumerate_partitions(2), 2, lat)
    gram.max_relative_offdiag()
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath
from loguru import logger

from config.config_loader import get_config_loader
from core.errors import ConfigurationLimitExceeded, InadmissibleParameters, NTooSmall
from core.partition import Partition, format_partition
from core.scalar import Scalar, det, format_scalar, imag_part, magnitude, real_part
from symfun.bigq import (
    QParams,
    Series,
    UnivariatePoly,
    finite_norm,
    lattice,
    lattice_weights,
    phi_limit_norm,
    phi_polynomials,
    weight_profile,
)
from symfun.interp import vandermonde


@dataclass(frozen=True)
class Configuration:
    """N distinct lattice points, stored in strictly decreasing order, with their lattice indices."""

    points: Tuple[Scalar, ...]
    indices: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass
class TruncatedLattice:
    """
    The 2K points of lattice(params, K) with per-N weight tables.

    Weights are exact relative weights for exact params and absolute BigFloat
    weights otherwise.
    """

    params: QParams
    K: int
    points: Tuple[Scalar, ...]
    exact_tolerance: float = 1e-12
    _weights: Dict[int, Tuple[Scalar, ...]] = field(default_factory=dict, repr=False)
    _tails: Dict[int, mpmath.mpf] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.points)

    def weights(self, N: int) -> Tuple[Scalar, ...]:
        """Single-point weights for the N-variable shift (cached per N)."""
        key = 1 if self.params.series is Series.EXCEPTIONAL else N
        if key not in self._weights:
            c, d = self.params.shifted(key)
            self._weights[key] = lattice_weights(self.params, self.K, c, d, self.exact_tolerance)
        return self._weights[key]

    def weight_table(self, N: int) -> Dict[Scalar, Scalar]:
        return dict(zip(self.points, self.weights(N)))

    def tail_ratio(self, N: int = 1) -> mpmath.mpf:
        """Weight of the first omitted point on either side relative to the largest kept weight."""
        if N not in self._tails:
            c, d = self.params.shifted(N)
            alpha_side, beta_side = weight_profile(self.params, c, d, self.K + 1)
            kept = max(alpha_side[:self.K] + beta_side[:self.K])
            self._tails[N] = max(alpha_side[self.K], beta_side[self.K]) / kept
        return self._tails[N]

    def tail_bound(self, N: int = 1) -> mpmath.mpf:
        """Crude bound on omitted configuration mass: tail ratio times C(2K, N)."""
        return self.tail_ratio(N) * math.comb(self.size, max(N, 1))


def _setting(key: str, default: Any) -> Any:
    return get_config_loader().get(key, default=default)


def build_lattice(params: QParams, K: Optional[int] = None, tail_tol: Optional[float] = None,
                  N: int = 1, exact_tolerance: Optional[float] = None) -> TruncatedLattice:
    """
    Truncated lattice for ``params``.

    When K is omitted it is the smallest K >= ceil(N/2) whose single-point tail
    ratio (for the N-variable weights) is below ``tail_tol``.
    """
    tail_tol = tail_tol if tail_tol is not None else float(_setting("tail_tolerance", 1e-14))
    exact_tolerance = exact_tolerance if exact_tolerance is not None else float(
        _setting("exact_weight_tolerance", 1e-12)
    )
    if K is None:
        K = default_truncation(params, N, tail_tol)
    lat = TruncatedLattice(params, K, lattice(params, K), exact_tolerance)
    logger.debug(f"Truncated lattice K={K} ({lat.size} points) for {params.series.value} parameters")
    return lat


def default_truncation(params: QParams, N: int, tail_tol: float) -> int:
    """Smallest K with tail ratio below tail_tol, capped at max_lattice_index."""
    cap = int(_setting("max_lattice_index", 80))
    c, d = params.shifted(N)
    alpha_side, beta_side = weight_profile(params, c, d, cap + 1)
    kept = mpmath.mpf(0)
    for K in range(1, cap + 1):
        kept = max(kept, alpha_side[K - 1], beta_side[K - 1])
        if 2 * K >= N and max(alpha_side[K], beta_side[K]) / kept < tail_tol:
            logger.debug(f"Default truncation K={K} (tail tolerance {tail_tol})")
            return K
    logger.warning(f"Tail tolerance {tail_tol} not reached below K={cap}; using the cap")
    return cap


def enumerate_configurations(lat: TruncatedLattice, N: int,
                             max_configs: Optional[int] = None) -> Iterator[Configuration]:
    """
    All N-point configurations, lexicographic over sorted point indices.

    Raises:
        ConfigurationLimitExceeded: If C(2K, N) exceeds the guard
    """
    limit = max_configs if max_configs is not None else int(_setting("max_configs", 200_000))
    count = math.comb(lat.size, N)
    if count > limit:
        logger.warning(f"Enumeration of {count} configurations exceeds the guard {limit}")
        raise ConfigurationLimitExceeded(
            f"C({lat.size},{N}) = {count} configurations exceeds max_configs={limit}"
        )
    logger.debug(f"Enumerating {count} configurations (N={N}, K={lat.K})")
    for indices in itertools.combinations(range(lat.size), N):
        reversed_indices = tuple(reversed(indices))
        yield Configuration(tuple(lat.points[i] for i in reversed_indices), reversed_indices)


def config_weight(X: Configuration, N: int, lat: TruncatedLattice) -> Scalar:
    """Unnormalized weight prod_i w(x_i) * Vandermonde(X)^2."""
    if X.size != N:
        raise ValueError(f"Configuration has {X.size} points, expected {N}")
    weights = lat.weights(N)
    value = vandermonde(X.points) ** 2
    for index in X.indices:
        value = value * weights[index]
    return value


def normalize(lat: TruncatedLattice, N: int) -> Scalar:
    """Sum of config_weight over all configurations (1 for N = 0)."""
    if N == 0:
        return lat.params.ctx.one()
    total = lat.params.ctx.zero()
    for X in enumerate_configurations(lat, N):
        total = total + config_weight(X, N, lat)
    return total


def expectation(f: Callable[[Tuple[Scalar, ...]], Scalar], N: int, lat: TruncatedLattice) -> Scalar:
    """<M_N, f> by brute force; f receives the configuration points."""
    numerator = lat.params.ctx.zero()
    total = lat.params.ctx.zero()
    for X in enumerate_configurations(lat, N):
        w = config_weight(X, N, lat)
        total = total + w
        numerator = numerator + w * f(X.points)
    return numerator / total


def _degrees(lam: Partition, N: int) -> List[int]:
    return [part + N - i for i, part in enumerate(lam.padded(N), start=1)]


def _check_lengths(lambdas: Sequence[Partition], N: int) -> None:
    for lam in lambdas:
        if lam.length > N:
            raise NTooSmall(f"N={N} is smaller than the length of {format_partition(lam)}")


def _polynomials(lambdas: Sequence[Partition], N: int, lat: TruncatedLattice) -> List[UnivariatePoly]:
    max_degree = max([_degrees(lam, N)[0] for lam in lambdas if N] + [N])
    return phi_polynomials(lat.params, N, max_degree, lat.weight_table(N))


@dataclass
class GramMatrix:
    """Normalized inner products <phi_{lambda|N}, phi_{mu|N}> under M_N."""

    labels: List[Partition]
    entries: List[List[Scalar]]
    N: int
    K: int
    method: str
    tail_bound: mpmath.mpf

    def entry(self, lam: Partition, mu: Partition) -> Scalar:
        return self.entries[self.labels.index(lam)][self.labels.index(mu)]

    def diagonal(self) -> List[Scalar]:
        return [self.entries[i][i] for i in range(len(self.labels))]

    def is_symmetric(self) -> bool:
        size = len(self.labels)
        return all(self.entries[i][j] == self.entries[j][i] for i in range(size) for j in range(i))

    def max_relative_offdiag(self) -> mpmath.mpf:
        """max |G[l,m]| / sqrt(G[l,l] G[m,m]) over l != m."""
        size = len(self.labels)
        worst = mpmath.mpf(0)
        for i in range(size):
            for j in range(size):
                if i == j:
                    continue
                scale = mpmath.sqrt(magnitude(self.entries[i][i]) * magnitude(self.entries[j][j]))
                worst = max(worst, magnitude(self.entries[i][j]) / scale)
        return worst

    def rows(self) -> List[Dict[str, str]]:
        """CSV-ready rows: lambda, mu, value_re, value_im, tail_bound."""
        result = []
        for i, lam in enumerate(self.labels):
            for j, mu in enumerate(self.labels):
                value = self.entries[i][j]
                result.append({
                    "lambda": format_partition(lam),
                    "mu": format_partition(mu),
                    "value_re": format_scalar(real_part(value)),
                    "value_im": format_scalar(imag_part(value)),
                    "tail_bound": mpmath.nstr(self.tail_bound, 6),
                })
        return result

    def to_json(self) -> Dict[str, Any]:
        return {"N": self.N, "K": self.K, "method": self.method, "entries": self.rows()}


def gram_bruteforce(lambdas: Sequence[Partition], N: int, lat: TruncatedLattice) -> GramMatrix:
    """
    Gram matrix by summing over every configuration.

    Raises:
        NTooSmall: If some lambda is longer than N
        ConfigurationLimitExceeded: Beyond max_bruteforce_N / max_bruteforce_K or max_configs
    """
    lambdas = list(lambdas)
    _check_lengths(lambdas, N)
    max_N = int(_setting("max_bruteforce_N", 4))
    max_K = int(_setting("max_bruteforce_K", 12))
    if N > max_N or lat.K > max_K:
        raise ConfigurationLimitExceeded(
            f"Brute-force Gram is capped at N <= {max_N}, K <= {max_K} (got N={N}, K={lat.K})"
        )

    polys = _polynomials(lambdas, N, lat)
    values = [[poly(x) for x in lat.points] for poly in polys]
    degrees = [_degrees(lam, N) for lam in lambdas]
    size = len(lambdas)
    sums = [[lat.params.ctx.zero() for _ in range(size)] for _ in range(size)]
    total = lat.params.ctx.zero()
    weights = lat.weights(N)

    for X in enumerate_configurations(lat, N):
        w = lat.params.ctx.one()
        for index in X.indices:
            w = w * weights[index]
        V = vandermonde(X.points)
        total = total + w * V * V
        alternants = [
            det([[values[degree][index] for index in X.indices] for degree in lam_degrees])
            for lam_degrees in degrees
        ]
        for i in range(size):
            for j in range(i, size):
                sums[i][j] = sums[i][j] + w * alternants[i] * alternants[j]

    entries = [[sums[min(i, j)][max(i, j)] / total for j in range(size)] for i in range(size)]
    logger.info(f"Brute-force Gram ({size} x {size}) at N={N}, K={lat.K} ✓")
    return GramMatrix(lambdas, entries, N, lat.K, "bruteforce", lat.tail_bound(N))


def cross_moments(row_values: Sequence[Sequence[Scalar]], column_values: Sequence[Sequence[Scalar]],
                  weights: Sequence[Scalar]) -> List[List[Scalar]]:
    """m[i][k] = sum_x w(x) f_i(x) g_k(x) from tabulated values."""
    return [
        [sum(w * f * g for w, f, g in zip(weights, row, column)) for column in column_values]
        for row in row_values
    ]


def gram_andreief(lambdas: Sequence[Partition], N: int, lat: TruncatedLattice) -> GramMatrix:
    """
    Gram matrix through N x N determinants of univariate cross-moments.

    G[l, m] = det[M(a_i, b_k)] / det[M(N-i, N-k)] with a_i = l_i+N-i, b_k = m_k+N-k
    and M(a, b) = sum_x w(x) phi_a(x) phi_b(x). Equal to the brute-force sum.
    """
    lambdas = list(lambdas)
    _check_lengths(lambdas, N)
    polys = _polynomials(lambdas, N, lat)
    values = [[poly(x) for x in lat.points] for poly in polys]
    weights = lat.weights(N)
    moments = cross_moments(values, values, weights)

    def _block(rows: List[int], columns: List[int]) -> Scalar:
        return det([[moments[a][b] for b in columns] for a in rows])

    empty = _degrees(Partition(), N)
    total = _block(empty, empty)
    degrees = [_degrees(lam, N) for lam in lambdas]
    size = len(lambdas)
    entries = [[None] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            value = _block(degrees[i], degrees[j]) / total
            entries[i][j] = value
            entries[j][i] = value
    logger.info(f"Andreief Gram ({size} x {size}) at N={N}, K={lat.K} ✓")
    return GramMatrix(lambdas, entries, N, lat.K, "andreief", lat.tail_bound(N))


def mean_phi_check(lam: Partition, N: int, lat: TruncatedLattice) -> Scalar:
    """<M_N, phi_{lambda|N}> by brute force (1 for the empty partition, ~0 otherwise)."""
    _check_lengths([lam], N)
    polys = _polynomials([lam], N, lat)
    degrees = _degrees(lam, N)

    def _phi(points: Tuple[Scalar, ...]) -> Scalar:
        matrix = [[polys[degree](x) for x in points] for degree in degrees]
        return det(matrix) / vandermonde(points)

    return expectation(_phi, N, lat)


def schur_moment(nu: Partition, N: int, lat: TruncatedLattice) -> Scalar:
    """<M_N, S_{nu|N}> via Cauchy-Binet with monomial alternants."""
    if nu.length > N:
        return lat.params.ctx.zero()
    weights = lat.weights(N)
    base = [[x ** (N - i) for x in lat.points] for i in range(1, N + 1)]
    shifted = [[x ** (part + N - i) for x in lat.points] for i, part in enumerate(nu.padded(N), start=1)]
    return det(cross_moments(shifted, base, weights)) / det(cross_moments(base, base, weights))


def schur_moment_study(nu: Partition, N_values: Sequence[int],
                       lattice_builder: Callable[[int], TruncatedLattice]) -> List[Dict[str, Any]]:
    """<M_N, S_{nu|N}> for each N with Cauchy differences and their ratios."""
    rows: List[Dict[str, Any]] = []
    previous_value = None
    previous_difference = None
    for N in N_values:
        value = schur_moment(nu, N, lattice_builder(N))
        difference = magnitude(value - previous_value) if previous_value is not None else None
        ratio = difference / previous_difference if difference is not None and previous_difference else None
        rows.append({"N": N, "value": value, "difference": difference, "ratio": ratio})
        previous_value, previous_difference = value, difference
    logger.info(f"Schur moment study for nu={format_partition(nu)} over N={list(N_values)}")
    return rows


def norm_convergence_study(lam: Partition, N_values: Sequence[int], params: QParams,
                           lattice_builder: Optional[Callable[[int], TruncatedLattice]] = None
                           ) -> List[Dict[str, Any]]:
    """
    Finite-N norms against the limit norm of Phi_lambda.

    Each row carries N, finite, limit, error (relative when the limit is nonzero)
    and ratio to the previous error. With a lattice builder the Gram diagonal at
    that N is added as ``gram_diagonal``.
    """
    limit = phi_limit_norm(lam, params)
    scale = magnitude(limit) if limit != 0 else mpmath.mpf(1)
    rows: List[Dict[str, Any]] = []
    previous = None
    for N in N_values:
        if N < lam.length:
            continue
        finite = finite_norm(lam, N, params)
        error = magnitude(finite - limit) / scale
        row = {
            "N": N,
            "finite": finite,
            "limit": limit,
            "error": error,
            "ratio": error / previous if previous else None,
        }
        if lattice_builder is not None:
            row["gram_diagonal"] = gram_andreief([lam], N, lattice_builder(N)).entries[0][0]
        rows.append(row)
        previous = error
    logger.info(f"Norm convergence study for lambda={format_partition(lam)} ✓")
    return rows


def _target(points: Sequence[Scalar], N: int) -> List[Scalar]:
    """N points of largest modulus, ties broken towards positive points."""
    return sorted(points, key=lambda x: (abs(x), x), reverse=True)[:N]


def concentration_diagnostic(N_values: Sequence[int], lat: TruncatedLattice) -> List[Dict[str, Any]]:
    """
    Exceptional-case diagnostic: how close M_N sits to the outermost packing.

    Per N: mean_sum = <M_N, sum x_i>, target_sum over the N outermost points,
    gap = |target_sum - mean_sum|, abs_gap = sum_target |x| - <M_N, sum |x_i|>,
    and the most probable configuration.

    Raises:
        InadmissibleParameters: If the lattice parameters are not exceptional
    """
    if lat.params.series is not Series.EXCEPTIONAL:
        raise InadmissibleParameters(
            "concentration diagnostic needs gamma = delta = 0",
            clause="exceptional: gamma = delta = 0",
        )
    rows: List[Dict[str, Any]] = []
    for N in N_values:
        if N > lat.size:
            raise ValueError(f"N={N} exceeds the {lat.size} lattice points")
        total = lat.params.ctx.zero()
        mean_sum = lat.params.ctx.zero()
        mean_abs = lat.params.ctx.zero()
        best, best_weight = None, None
        for X in enumerate_configurations(lat, N):
            w = config_weight(X, N, lat)
            total = total + w
            mean_sum = mean_sum + w * sum(X.points)
            mean_abs = mean_abs + w * sum(abs(x) for x in X.points)
            if best_weight is None or w > best_weight:
                best, best_weight = X, w
        mean_sum = mean_sum / total
        mean_abs = mean_abs / total
        target = _target(lat.points, N)
        target_sum = sum(target)
        rows.append({
            "N": N,
            "mean_sum": mean_sum,
            "target_sum": target_sum,
            "gap": abs(target_sum - mean_sum),
            "abs_gap": sum(abs(x) for x in target) - mean_abs,
            "argmax": [format_scalar(x) for x in best.points],
            "argmax_is_target": sorted(best.points) == sorted(target),
        })
        logger.debug(f"Concentration N={N}: abs_gap={format_scalar(rows[-1]['abs_gap'])}")
    return rows

"""
Interpolation Functions Module

Interpolation symmetric functions I_mu and their N-variable versions I_{mu|N}.

Provides:
- sigma(mu, nu): Schur coefficients of I_mu (determinant of reciprocal q-factorials)
- interp_expansion / interp_poly_expansion: Schur-basis expansions (limit and finite N)
- interp_poly_det / interp_combinatorial: determinant and reverse-tableau evaluations
- h_norm: value of I_mu at its own node X(mu)
- schur_eval: bialternant Schur polynomials
- projection_consistency_check, newton_expand, convergence helpers

All evaluations are exact when the inputs are exact.

Usage:
    from fractions import Fraction
    from core.qseries import QContext
    from core.partition import parse_partition
    from symfun.interp import interp_expansion

    ctx = QContext(Fraction(1, 2))
    expansion = interp_expansion(parse_partition("2"), ctx)
    expansion.coefficient(parse_partition("1"))   # Fraction(-4, 1)
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence

import mpmath
from loguru import logger

from core.errors import CoincidentPoints, NTooSmall
from core.partition import (
    Partition,
    conjugate,
    contains,
    enumerate_reverse_tableaux,
    format_partition,
    hook_lengths,
    n_stat,
    parse_partition,
    subpartitions,
)
from core.qseries import QContext, poch_diagram, qbinomial, recip_qpoch
from core.scalar import Scalar, det, format_scalar, magnitude, parse_scalar, to_bigfloat


@dataclass
class SchurExpansion:
    """
    Finite linear combination of Schur functions.

    Zero coefficients are never stored. ``top`` is the distinguished maximal
    index (mu for I_mu, lambda for Phi_lambda). ``basis`` is "schur", or
    "interp" when the keys index interpolation functions instead.
    """

    coeffs: Dict[Partition, Scalar] = field(default_factory=dict)
    top: Optional[Partition] = None
    basis: str = "schur"

    def __post_init__(self):
        self.coeffs = {nu: value for nu, value in self.coeffs.items() if value != 0}

    @property
    def degree(self) -> int:
        return max((nu.size for nu in self.coeffs), default=0)

    def coefficient(self, nu: Partition) -> Scalar:
        return self.coeffs.get(nu, 0)

    def indices(self) -> List[Partition]:
        """Stored indices in graded reverse-lex order."""
        return sorted(self.coeffs, key=Partition.sort_key)

    def items(self):
        return [(nu, self.coeffs[nu]) for nu in self.indices()]

    def evaluate(self, X: Sequence[Scalar]) -> Scalar:
        """Sum of c_nu * S_{nu|n}(X) with n = len(X); S_nu vanishes when length(nu) > n."""
        if self.basis != "schur":
            raise ValueError(f"Only Schur-basis expansions evaluate directly, not '{self.basis}'")
        total = 0
        for nu, value in self.items():
            total = total + value * schur_eval(nu, len(X), X)
        return total

    def to_json(self) -> Dict[str, Any]:
        return {
            "basis": self.basis,
            "coeffs": [
                {"index": format_partition(nu), "value": format_scalar(value)}
                for nu, value in self.items()
            ],
        }

    @classmethod
    def from_json(cls, payload: Dict[str, Any]) -> "SchurExpansion":
        basis = payload.get("basis")
        if basis not in ("schur", "interp"):
            raise ValueError(f"Unsupported basis: {basis!r}")
        coeffs = {
            parse_partition(entry["index"]): parse_scalar(entry["value"])
            for entry in payload.get("coeffs", [])
        }
        top = max(coeffs, key=Partition.sort_key) if coeffs else None
        return cls(coeffs, top, basis)


def vandermonde(X: Sequence[Scalar]) -> Scalar:
    """prod_{i<j} (x_i - x_j)."""
    result = 1
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            result = result * (X[i] - X[j])
    return result


def _checked_vandermonde(X: Sequence[Scalar]) -> Scalar:
    value = vandermonde(X)
    if value == 0:
        raise CoincidentPoints(
            f"Coordinates are not pairwise distinct: {[format_scalar(x) for x in X]}"
        )
    return value


def _zero_like(X: Sequence[Scalar]) -> Scalar:
    return X[0] * 0 if X else 0


@lru_cache(maxsize=None)
def sigma(mu: Partition, nu: Partition, ctx: QContext) -> Scalar:
    """
    Coefficient of S_nu in I_mu.

    sigma = (-1)^{|mu|-|nu|} q^{n(mu)-n(mu')-n(nu)+n(nu')} det[1/(q;q)_{mu_i-nu_k-i+k}]
    with i, k = 1..length(mu). Returns exact 0 when nu is not contained in mu.
    """
    if not contains(mu, nu):
        return ctx.zero()
    size = mu.length
    padded_nu = nu.padded(size)
    matrix = [
        [recip_qpoch(mu.parts[i] - padded_nu[k] - i + k, ctx) for k in range(size)]
        for i in range(size)
    ]
    exponent = n_stat(mu) - n_stat(conjugate(mu)) - n_stat(nu) + n_stat(conjugate(nu))
    sign = -1 if (mu.size - nu.size) % 2 else 1
    return sign * ctx.power(exponent) * det(matrix)


def interp_expansion(mu: Partition, ctx: QContext) -> SchurExpansion:
    """I_mu = sum over nu in mu of sigma(mu, nu) S_nu."""
    coeffs = {nu: sigma(mu, nu, ctx) for nu in subpartitions(mu)}
    logger.debug(f"I_{format_partition(mu)} expanded on {len(coeffs)} Schur functions")
    return SchurExpansion(coeffs, top=mu)


def h_norm(mu: Partition, ctx: QContext) -> Scalar:
    """H(mu) = q^{-sum mu_i(mu_i-i+1)} prod over boxes of (1 - q^{hook})."""
    exponent = -sum(p * (p - i + 1) for i, p in enumerate(mu.parts, start=1))
    result = ctx.power(exponent)
    for hook in hook_lengths(mu).values():
        result = result * (1 - ctx.power(hook))
    return result


def _check_points(mu: Partition, N: int, X: Sequence[Scalar]) -> None:
    if N < mu.length:
        raise NTooSmall(f"N={N} is smaller than the length of {format_partition(mu)}")
    if len(X) != N:
        raise ValueError(f"Expected {N} coordinates, got {len(X)}")


def interp_poly_det(mu: Partition, N: int, X: Sequence[Scalar], ctx: QContext) -> Scalar:
    """
    I_{mu|N}(X) as a ratio of determinants.

    Row i of the numerator holds prod_{t=1..mu_i+N-i} (x_j - q^{N-t}).

    Raises:
        NTooSmall: If N < length(mu)
        CoincidentPoints: If two coordinates coincide
    """
    _check_points(mu, N, X)
    if N == 0:
        return ctx.one()
    denominator = _checked_vandermonde(X)
    padded = mu.padded(N)
    matrix = []
    for i in range(1, N + 1):
        factors = padded[i - 1] + N - i
        row = []
        for x in X:
            entry = ctx.one()
            for t in range(1, factors + 1):
                entry = entry * (x - ctx.power(N - t))
            row.append(entry)
        matrix.append(row)
    return det(matrix) / denominator


def interp_poly_expansion(mu: Partition, N: int, ctx: QContext) -> SchurExpansion:
    """
    Schur-polynomial expansion of I_{mu|N}.

    The coefficient of S_{nu|N} is (q^N;q)_mu / (q^N;q)_nu * sigma(mu, nu).

    Raises:
        NTooSmall: If N < length(mu)
    """
    if N < mu.length:
        raise NTooSmall(f"N={N} is smaller than the length of {format_partition(mu)}")
    qN = ctx.power(N)
    top_factor = poch_diagram(qN, mu, ctx)
    coeffs = {
        nu: top_factor / poch_diagram(qN, nu, ctx) * sigma(mu, nu, ctx)
        for nu in subpartitions(mu)
    }
    return SchurExpansion(coeffs, top=mu)


def interp_combinatorial(mu: Partition, N: int, X: Sequence[Scalar], ctx: QContext) -> Scalar:
    """
    Reverse-tableau sum: sum over T of prod (x_{T(i,j)} - q^{T(i,j)+i-j-1}).

    Returns 0 when N < length(mu).
    """
    if len(X) != N:
        raise ValueError(f"Expected {N} coordinates, got {len(X)}")
    total = ctx.zero()
    for tableau in enumerate_reverse_tableaux(mu, N):
        term = ctx.one()
        for (i, j), value in tableau.items():
            term = term * (X[value - 1] - ctx.power(value + i - j - 1))
        total = total + term
    return total


def schur_eval(nu: Partition, N: int, X: Sequence[Scalar]) -> Scalar:
    """
    S_{nu|N}(X) = det[x_j^{nu_k+N-k}] / Vandermonde.

    Returns 0 when length(nu) > N.

    Raises:
        CoincidentPoints: If two coordinates coincide
    """
    if len(X) != N:
        raise ValueError(f"Expected {N} coordinates, got {len(X)}")
    if nu.length > N:
        return _zero_like(X)
    if N == 0:
        return 1
    denominator = _checked_vandermonde(X)
    padded = nu.padded(N)
    matrix = [[x ** (padded[k] + N - k - 1) for x in X] for k in range(N)]
    return det(matrix) / denominator


def complete_homogeneous(Y: Sequence[Scalar], degree: int) -> List[Scalar]:
    """h_0..h_degree of the variables Y (no division, so coincident values are fine)."""
    unit = Y[0] ** 0 if Y else 1
    h = [unit] + [unit * 0] * degree
    for y in Y:
        for k in range(1, degree + 1):
            h[k] = h[k] + y * h[k - 1]
    return h


def schur_jacobi_trudi(nu: Partition, Y: Sequence[Scalar]) -> Scalar:
    """S_nu(Y) = det[h_{nu_i-i+j}] (valid for repeated coordinates)."""
    size = nu.length
    if size == 0:
        return 1
    h = complete_homogeneous(Y, nu.part(1) + size)

    def _h(k: int) -> Scalar:
        return h[k] if 0 <= k < len(h) else h[0] * 0

    matrix = [[_h(nu.parts[i] - i + j) for j in range(size)] for i in range(size)]
    return det(matrix)


def projection_consistency_check(mu: Partition, N: int, X: Sequence[Scalar],
                                 ctx: QContext) -> bool:
    """
    True iff I_{mu|N}(X, q^{N-1}) == I_{mu|N-1}(X) exactly.

    Raises:
        NTooSmall: If N - 1 < length(mu)
        CoincidentPoints: If X contains q^{N-1} or repeated values
    """
    if N - 1 < mu.length:
        raise NTooSmall(f"N-1={N - 1} is smaller than the length of {format_partition(mu)}")
    extended = list(X) + [ctx.power(N - 1)]
    return interp_poly_det(mu, N, extended, ctx) == interp_poly_det(mu, N - 1, list(X), ctx)


def newton_expand(N: int, m: int, ctx: QContext) -> List[Scalar]:
    """
    Monomial coefficients of (x - q^{N-1})(x - q^{N-2})...(x - q^{N-m}).

    Entry n is the coefficient of x^n.
    """
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    coefficients = []
    for n in range(m + 1):
        exponent = N * (m - n) - (m * (m + 1) - n * (n + 1)) // 2
        sign = -1 if (m - n) % 2 else 1
        coefficients.append(sign * ctx.power(exponent) * qbinomial(m, n, ctx))
    return coefficients


def interp_eval(mu: Partition, X: Sequence[Scalar], ctx: QContext) -> Scalar:
    """
    I_mu at the finitely supported point (X, 0, 0, ...).

    Uses the Schur expansion; S_nu vanishes when length(nu) > len(X).
    """
    return interp_expansion(mu, ctx).evaluate(X)


def combinatorial_tail_bound(mu: Partition, N: int, X: Sequence[Scalar], ctx: QContext,
                             M: Optional[int] = None, tolerance: float = 1e-14) -> mpmath.mpf:
    """
    A-posteriori bound on the tail of the infinite tableau sum.

    Builds the majorant y_n = |x_n| + q^{n-mu_1} (x_n = 0 past the support of X)
    and returns S_mu(y_1..y_M) - S_mu(y_1..y_N). When M is not given it is
    chosen so that q^{M-mu_1} drops below ``tolerance``.
    """
    q = to_bigfloat(ctx.q)
    if M is None:
        extra = int(math.ceil(math.log(tolerance) / math.log(float(q)))) + mu.part(1)
        M = N + max(extra, 1)
    if M < N:
        raise ValueError(f"M={M} must be at least N={N}")

    majorant = []
    for n in range(1, M + 1):
        x = magnitude(X[n - 1]) if n <= len(X) else mpmath.mpf(0)
        majorant.append(x + q ** (n - mu.part(1)))

    bound = schur_jacobi_trudi(mu, majorant) - schur_jacobi_trudi(mu, majorant[:N])
    logger.debug(
        f"Tail bound for I_{format_partition(mu)} at N={N} (M={M}): {mpmath.nstr(bound, 8)}"
    )
    return bound


def interp_convergence(mu: Partition, N_values: Iterable[int], ctx: QContext) -> List[Dict[str, Any]]:
    """
    Stable-coefficient convergence of I_{mu|N} towards I_mu.

    For each N: the largest |c_nu(N) - sigma(mu, nu)| and its ratio to the
    previous row.
    """
    limit = interp_expansion(mu, ctx)
    rows: List[Dict[str, Any]] = []
    previous = None
    for N in N_values:
        if N < mu.length:
            continue
        finite = interp_poly_expansion(mu, N, ctx)
        error = max(
            (magnitude(finite.coefficient(nu) - limit.coefficient(nu)) for nu in subpartitions(mu)),
            default=mpmath.mpf(0),
        )
        ratio = error / previous if previous else None
        rows.append({"N": N, "max_error": error, "ratio": ratio})
        previous = error
    return rows


__all__ = [
    "SchurExpansion",
    "combinatorial_tail_bound",
    "complete_homogeneous",
    "h_norm",
    "interp_combinatorial",
    "interp_convergence",
    "interp_eval",
    "interp_expansion",
    "interp_poly_det",
    "interp_poly_expansion",
    "newton_expand",
    "projection_consistency_check",
    "schur_eval",
    "schur_jacobi_trudi",
    "sigma",
    "vandermonde",
]

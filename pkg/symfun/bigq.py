"""
Big q-Jacobi Module

Two-sided q-lattice, weights, admissibility classification, univariate and
N-variate big q-Jacobi polynomials, the rho coefficients, the limit
functions Phi_lambda and their norms.

Parameters (q, alpha, beta, gamma, delta) live in a QParams value. The
N-variable polynomials use the shifted pair (c, d) = (gamma q^{1-N}, delta q^{1-N}).

Usage:
    from symfun.bigq import classify, phi_limit_expansion
    from core.partition import parse_partition
    from core.scalar import parse_scalar

    params = classify(parse_scalar("1/2"), 1, -1, parse_scalar("1/5+1/7i"), parse_scalar("1/5-1/7i"))
    expansion = phi_limit_expansion(parse_partition("1"), params)
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
from loguru import logger

from core.errors import (
    DegenerateMoments,
    InadmissibleParameters,
    NonPositiveWeight,
    NotReal,
    NTooSmall,
    PoleEncountered,
    ZeroCParameter,
)
from core.partition import Partition, contains, doubled, format_partition, subpartitions
from core.qseries import QContext, phi32_coefficients, poch, poch_diagram, recip_qpoch
from core.scalar import (
    GaussianRational,
    Scalar,
    as_real,
    conj,
    det,
    format_scalar,
    is_real,
    magnitude,
    parse_scalar,
    to_bigfloat,
)
from symfun.interp import SchurExpansion, _checked_vandermonde, sigma


class Series(str, Enum):
    """Admissible regime of the pair (gamma, delta)."""

    PRINCIPAL = "principal"
    COMPLEMENTARY = "complementary"
    EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class QParams:
    """
    Classified parameter tuple (q, alpha, beta, gamma, delta).

    Build through ``classify``; the constructor does not validate.
    """

    ctx: QContext
    alpha: Scalar
    beta: Scalar
    gamma: Scalar
    delta: Scalar
    series: Series

    @property
    def q(self) -> Scalar:
        return self.ctx.q

    @property
    def s(self) -> Scalar:
        """s = gamma delta q / (alpha beta)."""
        return _realify(self.gamma * self.delta * self.q / (self.alpha * self.beta))

    @property
    def is_exact(self) -> bool:
        return self.ctx.is_exact

    def shifted(self, N: int) -> Tuple[Scalar, Scalar]:
        """(c, d) = (gamma q^{1-N}, delta q^{1-N})."""
        factor = self.ctx.power(1 - N)
        return self.gamma * factor, self.delta * factor

    def to_bigfloat(self) -> "QParams":
        if not self.is_exact:
            return self
        return replace(
            self,
            ctx=self.ctx.to_bigfloat(),
            alpha=to_bigfloat(self.alpha),
            beta=to_bigfloat(self.beta),
            gamma=to_bigfloat(self.gamma),
            delta=to_bigfloat(self.delta),
        )

    def echo(self) -> Dict[str, str]:
        return {
            "q": format_scalar(self.q),
            "alpha": format_scalar(self.alpha),
            "beta": format_scalar(self.beta),
            "gamma": format_scalar(self.gamma),
            "delta": format_scalar(self.delta),
            "s": format_scalar(self.s),
            "series": self.series.value,
        }


def _realify(value: Scalar) -> Scalar:
    """Drop an exactly-zero imaginary part; leave genuinely complex values alone."""
    if isinstance(value, GaussianRational) and value.im == 0:
        return value.re
    if isinstance(value, mpmath.mpc) and value.imag == 0:
        return value.real
    return value


def _real_input(value: Scalar, name: str) -> Scalar:
    if not is_real(value):
        raise InadmissibleParameters(f"{name} must be real, got {format_scalar(value)}", clause=f"{name} real")
    return as_real(value)


def _interval_index(x: Scalar, anchor: Scalar, ctx: QContext, max_index: int = 10_000) -> Optional[int]:
    """
    Index k of the open interval containing x > 0 among (0, a q^-1), (a q^-1, a q^-2), ...

    Returns None when x sits exactly on a sequence point.
    """
    k = 1
    bound = anchor / ctx.q
    while x >= bound:
        if x == bound or k >= max_index:
            return None
        k += 1
        bound = bound / ctx.q
    return k


def classify(q: Any, alpha: Scalar, beta: Scalar, gamma: Scalar, delta: Scalar) -> QParams:
    """
    Validate and tag a parameter tuple.

    Args:
        q: QContext or exact rational in (0, 1)
        alpha: Rational > 0
        beta: Rational < 0
        gamma, delta: Conjugate Gaussian rationals, same-interval reals, or both 0

    Returns:
        QParams with its Series tag

    Raises:
        InadmissibleParameters: With the violated clause in ``clause``
    """
    try:
        ctx = q if isinstance(q, QContext) else QContext(q)
    except ValueError as e:
        raise InadmissibleParameters(str(e), clause="0 < q < 1")

    alpha = _real_input(alpha, "alpha")
    beta = _real_input(beta, "beta")
    if not alpha > 0:
        raise InadmissibleParameters(f"alpha must be positive, got {format_scalar(alpha)}", clause="alpha > 0")
    if not beta < 0:
        raise InadmissibleParameters(f"beta must be negative, got {format_scalar(beta)}", clause="beta < 0")

    if gamma == 0 and delta == 0:
        series = Series.EXCEPTIONAL
        gamma, delta = Fraction(0), Fraction(0)
    elif not is_real(gamma) or not is_real(delta):
        if delta != conj(gamma):
            raise InadmissibleParameters(
                f"complex gamma={format_scalar(gamma)} requires delta = conj(gamma), "
                f"got delta={format_scalar(delta)}",
                clause="principal: gamma = conj(delta)",
            )
        series = Series.PRINCIPAL
    else:
        gamma, delta = as_real(gamma), as_real(delta)
        if gamma == 0 or delta == 0:
            raise InadmissibleParameters(
                "complementary series needs gamma and delta both nonzero",
                clause="complementary: nonzero",
            )
        if (gamma > 0) != (delta > 0):
            raise InadmissibleParameters(
                f"gamma={format_scalar(gamma)} and delta={format_scalar(delta)} straddle 0",
                clause="complementary: same interval",
            )
        anchor = alpha if gamma > 0 else -beta
        index_gamma = _interval_index(abs(gamma), anchor, ctx)
        index_delta = _interval_index(abs(delta), anchor, ctx)
        if index_gamma is None or index_gamma != index_delta:
            raise InadmissibleParameters(
                f"gamma={format_scalar(gamma)} and delta={format_scalar(delta)} do not lie "
                f"together in one open interval of the lattice sequence",
                clause="complementary: same interval",
            )
        series = Series.COMPLEMENTARY

    params = QParams(ctx, alpha, beta, gamma, delta, series)
    logger.debug(f"Classified parameters as {series.value}: {params.echo()}")
    return params


def params_from_mapping(values: Dict[str, Any]) -> QParams:
    """Classify a mapping with keys q, alpha, beta, gamma, delta (literal strings or numbers)."""
    parsed = {}
    for key in ("q", "alpha", "beta", "gamma", "delta"):
        if key not in values:
            raise InadmissibleParameters(f"Missing parameter '{key}'", clause=f"{key} given")
        parsed[key] = parse_scalar(str(values[key]))
    return classify(parsed["q"], parsed["alpha"], parsed["beta"], parsed["gamma"], parsed["delta"])


def lattice(params: QParams, K: int) -> Tuple[Scalar, ...]:
    """
    The 2K points {beta^-1 q^k} and {alpha^-1 q^k}, k = 1..K, ascending.
    """
    if K < 1:
        raise ValueError(f"K must be at least 1, got {K}")
    negative = [params.ctx.power(k) / params.beta for k in range(1, K + 1)]
    positive = [params.ctx.power(k) / params.alpha for k in range(K, 0, -1)]
    return tuple(negative + positive)


def _positive_real(value: Scalar, where: str, tolerance: float = 1e-30) -> Scalar:
    if isinstance(value, mpmath.mpc):
        if abs(value.imag) > tolerance * max(abs(value), 1):
            raise NonPositiveWeight(f"Weight at {where} is not real: {format_scalar(value)}")
        value = value.real
    elif not is_real(value):
        raise NonPositiveWeight(f"Weight at {where} is not real: {format_scalar(value)}")
    else:
        value = as_real(value)
    if not value > 0:
        raise NonPositiveWeight(f"Weight at {where} is not positive: {format_scalar(value)}")
    return value


def weight(x: Scalar, params: QParams, c: Scalar, d: Scalar, tolerance: float = 1e-30) -> mpmath.mpf:
    """
    Absolute weight |x| (ax;q)_inf (bx;q)_inf / ((cx;q)_inf (dx;q)_inf) in BigFloat.

    Raises:
        NonPositiveWeight: If the value is not strictly positive
        PoleEncountered: If a denominator product vanishes
    """
    q = to_bigfloat(params.q)
    xb = to_bigfloat(x)
    numerator = mpmath.qp(to_bigfloat(params.alpha) * xb, q) * mpmath.qp(to_bigfloat(params.beta) * xb, q)
    denominator = mpmath.qp(to_bigfloat(c) * xb, q) * mpmath.qp(to_bigfloat(d) * xb, q)
    if denominator == 0:
        raise PoleEncountered(f"Weight denominator vanishes at x={format_scalar(x)}")
    return _positive_real(abs(xb) * numerator / denominator, format_scalar(x), tolerance)


def _side_step(k: int, u: Scalar, v: Scalar, c: Scalar, d: Scalar, ctx: QContext) -> Scalar:
    """W(u^-1 q^{k+1}) / W(u^-1 q^k) on one side of the lattice."""
    qk = ctx.power(k)
    numerator = ctx.q * (1 - c * qk / u) * (1 - d * qk / u)
    denominator = (1 - qk) * (1 - v * qk / u)
    return numerator / denominator


def exact_weight_depth(params: QParams, c: Scalar, d: Scalar, tolerance: float) -> int:
    """Truncation depth J so that the neglected factors of the cross-side products stay below tolerance."""
    q = float(to_bigfloat(params.q))
    largest = max(
        float(magnitude(z))
        for z in (
            params.alpha * params.q / params.beta,
            params.beta * params.q / params.alpha,
            c * params.q / params.alpha,
            c * params.q / params.beta,
            d * params.q / params.alpha,
            d * params.q / params.beta,
            1,
        )
    )
    depth = math.ceil((math.log(tolerance * (1 - q)) - math.log(4 * largest)) / math.log(q))
    return max(depth, 1)


def cross_side_constant(params: QParams, c: Scalar, d: Scalar, depth: int) -> Scalar:
    """
    W(beta^-1 q) / W(alpha^-1 q), with every infinite product cut at ``depth`` factors.

    Exact when the parameters are exact.
    """
    ctx = params.ctx
    alpha, beta, q = params.alpha, params.beta, params.q
    value = (alpha / -beta) * poch(alpha * q / beta, depth, ctx) / poch(beta * q / alpha, depth, ctx)
    value = value * poch(c * q / alpha, depth, ctx) * poch(d * q / alpha, depth, ctx)
    denominator = poch(c * q / beta, depth, ctx) * poch(d * q / beta, depth, ctx)
    if denominator == 0:
        raise PoleEncountered("Cross-side weight constant has a vanishing denominator")
    return _realify(value / denominator)


def lattice_weights(params: QParams, K: int, c: Scalar, d: Scalar,
                    exact_tolerance: float = 1e-12, tolerance: float = 1e-30) -> Tuple[Scalar, ...]:
    """
    Weights aligned with ``lattice(params, K)``.

    Exact parameters give relative weights W(x)/W(alpha^-1 q) (finite products on each
    side plus one truncated cross-side constant); BigFloat parameters give absolute weights.

    Raises:
        NonPositiveWeight: If some weight is not strictly positive
    """
    points = lattice(params, K)
    if not params.is_exact:
        return tuple(weight(x, params, c, d, tolerance) for x in points)

    ctx = params.ctx
    alpha_side = [ctx.one()]
    beta_side = [cross_side_constant(params, c, d, exact_weight_depth(params, c, d, exact_tolerance))]
    for k in range(1, K):
        alpha_side.append(alpha_side[-1] * _side_step(k, params.alpha, params.beta, c, d, ctx))
        beta_side.append(beta_side[-1] * _side_step(k, params.beta, params.alpha, c, d, ctx))

    ordered = beta_side + alpha_side[::-1]
    return tuple(_positive_real(_realify(w), format_scalar(x)) for x, w in zip(points, ordered))


def relative_weight(x: Scalar, params: QParams, c: Scalar, d: Scalar,
                    exact_tolerance: float = 1e-12, max_index: int = 10_000) -> Scalar:
    """
    W(x) / W(alpha^-1 q) for a single lattice point x.

    Raises:
        ValueError: If x is not a lattice point
    """
    side = params.alpha if x > 0 else params.beta
    ratio = x * side
    k = 1
    power = params.ctx.power(1)
    while power > ratio and k < max_index:
        k += 1
        power = params.ctx.power(k)
    if power != ratio:
        raise ValueError(f"{format_scalar(x)} is not a lattice point")
    weights = lattice_weights(params, k, c, d, exact_tolerance)
    points = lattice(params, k)
    return weights[points.index(x)]


def weight_profile(params: QParams, c: Scalar, d: Scalar, kmax: int) -> Tuple[List[mpmath.mpf], List[mpmath.mpf]]:
    """
    BigFloat relative weights on both sides for k = 1..kmax (alpha side, beta side).

    Used for choosing truncation indices.
    """
    fparams = params.to_bigfloat()
    fc, fd = to_bigfloat(c), to_bigfloat(d)
    ctx = fparams.ctx
    q = ctx.q
    constant = (fparams.alpha / -fparams.beta)
    constant *= mpmath.qp(fparams.alpha * q / fparams.beta, q) / mpmath.qp(fparams.beta * q / fparams.alpha, q)
    constant *= mpmath.qp(fc * q / fparams.alpha, q) * mpmath.qp(fd * q / fparams.alpha, q)
    constant /= mpmath.qp(fc * q / fparams.beta, q) * mpmath.qp(fd * q / fparams.beta, q)
    alpha_side = [mpmath.mpf(1)]
    beta_side = [constant]
    for k in range(1, kmax):
        alpha_side.append(alpha_side[-1] * _side_step(k, fparams.alpha, fparams.beta, fc, fd, ctx))
        beta_side.append(beta_side[-1] * _side_step(k, fparams.beta, fparams.alpha, fc, fd, ctx))
    return [abs(w) for w in alpha_side], [abs(w) for w in beta_side]


@dataclass(frozen=True)
class UnivariatePoly:
    """Polynomial with coefficients in ascending degree; trailing zeros are dropped."""

    coeffs: Tuple[Scalar, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coeffs", coeffs or (0,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x: Scalar) -> Scalar:
        value = self.coeffs[-1]
        for coefficient in reversed(self.coeffs[:-1]):
            value = value * x + coefficient
        return value

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        size = max(len(self.coeffs), len(other.coeffs))
        left = self.coeffs + (0,) * (size - len(self.coeffs))
        right = other.coeffs + (0,) * (size - len(other.coeffs))
        return UnivariatePoly(tuple(a + b for a, b in zip(left, right)))

    def __sub__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return self + other.scale(-1)

    def scale(self, factor: Scalar) -> "UnivariatePoly":
        return UnivariatePoly(tuple(factor * a for a in self.coeffs))

    def times_x(self) -> "UnivariatePoly":
        return UnivariatePoly((0,) + self.coeffs)

    def real_projection(self, tolerance: float = 1e-30) -> "UnivariatePoly":
        """
        Same polynomial with real coefficients.

        Raises:
            NotReal: If an exact coefficient has nonzero imaginary part, or a
                     BigFloat one exceeds ``tolerance`` relative to its modulus
        """
        projected = []
        for a in self.coeffs:
            if isinstance(a, mpmath.mpc):
                if abs(a.imag) > tolerance * max(abs(a), 1):
                    raise NotReal(f"Coefficient {format_scalar(a)} is not real")
                projected.append(a.real)
            else:
                projected.append(as_real(a))
        return UnivariatePoly(tuple(projected))

    def to_strings(self) -> List[str]:
        return [format_scalar(a) for a in self.coeffs]


def _linear_power(c: Scalar, k: int, ctx: QContext) -> UnivariatePoly:
    """(cx;q)_k as a polynomial in x."""
    poly = UnivariatePoly((ctx.one(),))
    for i in range(k):
        factor = UnivariatePoly((ctx.one(), -c * ctx.power(i)))
        poly = _multiply(poly, factor)
    return poly


def _multiply(left: UnivariatePoly, right: UnivariatePoly) -> UnivariatePoly:
    result = [0] * (len(left.coeffs) + len(right.coeffs) - 1)
    for i, a in enumerate(left.coeffs):
        for j, b in enumerate(right.coeffs):
            result[i + j] = result[i + j] + a * b
    return UnivariatePoly(tuple(result))


@lru_cache(maxsize=None)
def phi_univariate(ell: int, params: QParams, c: Scalar, d: Scalar) -> UnivariatePoly:
    """
    Monic big q-Jacobi polynomial phi_ell(x; q, alpha, beta, c, d) via the terminating 3phi2.

    Raises:
        ZeroCParameter: If c == 0
        PoleEncountered: If a denominator Pochhammer vanishes
    """
    if c == 0:
        raise ZeroCParameter("phi_univariate needs c != 0; use gram_schmidt_monic")
    ctx = params.ctx
    a, b = params.alpha, params.beta
    q = ctx.q
    top2 = c * d * ctx.power(ell + 1) / (a * b)
    bot1, bot2 = c * q / a, c * q / b

    prefactor_denominator = c ** ell * poch(top2, ell, ctx)
    if prefactor_denominator == 0:
        raise PoleEncountered(f"phi_{ell} prefactor has a vanishing denominator")
    prefactor = poch(bot1, ell, ctx) * poch(bot2, ell, ctx) / prefactor_denominator

    poly = UnivariatePoly((ctx.zero(),))
    for k, term in enumerate(phi32_coefficients(ell, top2, bot1, bot2, ctx)):
        poly = poly + _linear_power(c, k, ctx).scale(term)
    return poly.scale(prefactor)


def gram_schmidt_monic(ell_max: int, weight_table: Dict[Scalar, Scalar]) -> List[UnivariatePoly]:
    """
    Monic orthogonal polynomials of degrees 0..ell_max for sum_x w(x) f(x) g(x).

    Stieltjes three-term recurrence over the support; exact for exact weights.

    Raises:
        DegenerateMoments: If fewer than ell_max + 1 points carry positive weight
    """
    support = [(x, w) for x, w in weight_table.items() if w > 0]
    if len(support) < ell_max + 1:
        raise DegenerateMoments(
            f"{len(support)} weighted points cannot support degree {ell_max}"
        )
    points = [x for x, _ in support]
    weights = [w for _, w in support]
    one = weights[0] * 0 + 1

    polys = [UnivariatePoly((one,))]
    values = [one] * len(points)
    previous_values: Optional[List[Scalar]] = None
    previous_norm = None
    norm = sum(w * v * v for w, v in zip(weights, values))

    for _ in range(ell_max):
        if norm == 0:
            raise DegenerateMoments("Zero norm during orthogonalization")
        a = sum(w * x * v * v for w, x, v in zip(weights, points, values)) / norm
        new_poly = polys[-1].times_x() - polys[-1].scale(a)
        new_values = [(x - a) * v for x, v in zip(points, values)]
        if previous_values is not None:
            b = norm / previous_norm
            new_poly = new_poly - polys[-2].scale(b)
            new_values = [nv - b * pv for nv, pv in zip(new_values, previous_values)]
        previous_values, previous_norm = values, norm
        values = new_values
        norm = sum(w * v * v for w, v in zip(weights, values))
        polys.append(new_poly)
    return polys


def phi_polynomials(params: QParams, N: int, max_degree: int,
                    weight_table: Optional[Dict[Scalar, Scalar]] = None) -> List[UnivariatePoly]:
    """
    phi_0..phi_max_degree for the N-variable shift, projected to real coefficients.

    Uses the 3phi2 formula when gamma != 0, otherwise Gram-Schmidt on ``weight_table``.

    Raises:
        ZeroCParameter: If gamma == 0 and no weight table is given
    """
    c, d = params.shifted(N)
    if c == 0:
        if weight_table is None:
            raise ZeroCParameter("gamma = 0 needs a weight table for Gram-Schmidt")
        logger.debug(f"Exceptional parameters: orthogonalizing on {len(weight_table)} points")
        return gram_schmidt_monic(max_degree, weight_table)
    return [phi_univariate(ell, params, c, d).real_projection() for ell in range(max_degree + 1)]


def phi_multivariate_det(lam: Partition, N: int, X: Sequence[Scalar], params: QParams,
                         polys: Optional[Sequence[UnivariatePoly]] = None) -> Scalar:
    """
    phi_{lambda|N}(X) = det[phi_{lambda_i+N-i}(x_j)] / Vandermonde(X).

    Raises:
        NTooSmall: If N < length(lambda)
        CoincidentPoints: If two coordinates coincide
        ZeroCParameter: If gamma == 0 and no polynomials are supplied
    """
    if N < lam.length:
        raise NTooSmall(f"N={N} is smaller than the length of {format_partition(lam)}")
    if len(X) != N:
        raise ValueError(f"Expected {N} coordinates, got {len(X)}")
    if N == 0:
        return params.ctx.one()
    degrees = [part + N - i for i, part in enumerate(lam.padded(N), start=1)]
    if polys is None:
        polys = phi_polynomials(params, N, degrees[0])
    denominator = _checked_vandermonde(X)
    matrix = [[polys[degree](x) for x in X] for degree in degrees]
    return det(matrix) / denominator


def rho_tilde(ell: int, m: int, N: int, params: QParams) -> Scalar:
    """
    Coefficient of phi_ell(x; alpha, beta, gamma q^{1-N}, delta q^{1-N}) on the
    Newton product (x gamma - q^{N-1})...(x gamma - q^{N-m}).

    Raises:
        ZeroCParameter: If gamma == 0
    """
    if params.gamma == 0:
        raise ZeroCParameter("rho_tilde needs gamma != 0")
    if m < 0 or m > ell:
        return params.ctx.zero()
    ctx = params.ctx
    r = ell - m
    shift = ctx.power(m - N + 2)
    gamma, delta = params.gamma, params.delta
    numerator = poch(gamma * shift / params.alpha, r, ctx) * poch(gamma * shift / params.beta, r, ctx)
    denominator = ctx.power((m - N + 1) * r) * poch(
        gamma * delta * ctx.power(ell + m - 2 * N + 3) / (params.alpha * params.beta), r, ctx
    )
    if denominator == 0:
        raise PoleEncountered(f"rho_tilde({ell},{m}) at N={N} has a vanishing denominator")
    binomial = poch(ctx.q, ell, ctx) / (poch(ctx.q, m, ctx) * poch(ctx.q, r, ctx))
    return gamma ** (-ell) * binomial * numerator / denominator


def _rho_entry(lam_i: int, mu_k: int, i: int, k: int, params: QParams) -> Scalar:
    ctx = params.ctx
    r = lam_i - mu_k - i + k
    if r < 0:
        return ctx.zero()
    gamma, delta = params.gamma, params.delta
    shift = ctx.power(mu_k - k + 2)
    numerator = poch(gamma * shift / params.alpha, r, ctx) * poch(gamma * shift / params.beta, r, ctx)
    denominator = ctx.power((mu_k - k + 1) * r) * poch(
        gamma * delta * ctx.power(lam_i + mu_k - i - k + 3) / (params.alpha * params.beta), r, ctx
    )
    if denominator == 0:
        raise PoleEncountered(f"rho entry ({i},{k}) has a vanishing denominator")
    return numerator * recip_qpoch(r, ctx) / denominator


@lru_cache(maxsize=None)
def rho(lam: Partition, mu: Partition, params: QParams) -> Scalar:
    """
    Coefficient of I_mu(X gamma) in Phi_lambda(X).

    gamma^{-|lambda|} times a determinant of size length(lambda); zero unless mu is in lambda.

    Raises:
        ZeroCParameter: If gamma == 0
    """
    if params.gamma == 0:
        raise ZeroCParameter("rho needs gamma != 0")
    if not contains(lam, mu):
        return params.ctx.zero()
    size = lam.length
    padded_mu = mu.padded(size)
    matrix = [
        [_rho_entry(lam.parts[i], padded_mu[k], i + 1, k + 1, params) for k in range(size)]
        for i in range(size)
    ]
    return params.gamma ** (-lam.size) * det(matrix)


@dataclass
class PhiExpansion:
    """Phi_lambda on the interpolation basis I_mu(X gamma) and on the Schur basis."""

    interp: SchurExpansion
    schur: SchurExpansion

    def to_json(self) -> Dict[str, Any]:
        return {"interp": self.interp.to_json(), "schur": self.schur.to_json()}


def _schur_coefficient(lam: Partition, nu: Partition, params: QParams) -> Scalar:
    total = params.ctx.zero()
    for mu in subpartitions(lam):
        if contains(mu, nu):
            total = total + rho(lam, mu, params) * sigma(mu, nu, params.ctx)
    return _realify(params.gamma ** nu.size * total)


def phi_limit_expansion(lam: Partition, params: QParams) -> PhiExpansion:
    """
    Phi_lambda = sum_mu rho(lambda, mu) I_mu(X gamma) = sum_nu c_nu S_nu.

    c_nu = gamma^{|nu|} sum_{nu in mu in lambda} rho(lambda, mu) sigma(mu, nu).

    Raises:
        ZeroCParameter: If gamma == 0
    """
    if params.gamma == 0:
        raise ZeroCParameter("Phi_lambda expansion needs gamma != 0")
    subs = subpartitions(lam)
    interp_coeffs = {mu: rho(lam, mu, params) for mu in subs}
    schur_coeffs = {nu: _schur_coefficient(lam, nu, params) for nu in subs}
    logger.debug(f"Phi_{format_partition(lam)} expanded over {len(subs)} subpartitions")
    return PhiExpansion(
        interp=SchurExpansion(interp_coeffs, top=lam, basis="interp"),
        schur=SchurExpansion(schur_coeffs, top=lam),
    )


def phi_finite_expansion(lam: Partition, N: int, params: QParams) -> SchurExpansion:
    """
    Schur-polynomial expansion of phi_{lambda|N}.

    The coefficient of S_{nu|N} is (q^N;q)_lambda / (q^N;q)_nu times the limit coefficient.

    Raises:
        NTooSmall: If N < length(lambda)
        ZeroCParameter: If gamma == 0
    """
    if N < lam.length:
        raise NTooSmall(f"N={N} is smaller than the length of {format_partition(lam)}")
    limit = phi_limit_expansion(lam, params).schur
    ctx = params.ctx
    qN = ctx.power(N)
    top_factor = poch_diagram(qN, lam, ctx)
    coeffs = {
        nu: top_factor / poch_diagram(qN, nu, ctx) * value
        for nu, value in limit.items()
    }
    return SchurExpansion(coeffs, top=lam)


def phi_coefficient_convergence(lam: Partition, N_values: Sequence[int],
                                params: QParams) -> List[Dict[str, Any]]:
    """
    Per (N, nu): finite coefficient, limit, |error| and the ratio to the previous N.

    Rows with a zero limit error (nu = lambda) report ratio None.
    """
    limit = phi_limit_expansion(lam, params).schur
    previous: Dict[Partition, Any] = {}
    rows: List[Dict[str, Any]] = []
    for N in N_values:
        if N < lam.length:
            continue
        finite = phi_finite_expansion(lam, N, params)
        for nu in limit.indices():
            error = magnitude(finite.coefficient(nu) - limit.coefficient(nu))
            last = previous.get(nu)
            rows.append({
                "N": N,
                "nu": format_partition(nu),
                "finite": finite.coefficient(nu),
                "limit": limit.coefficient(nu),
                "error": error,
                "ratio": error / last if last else None,
            })
            previous[nu] = error
    return rows


def phi_limit_eval(lam: Partition, X: Sequence[Scalar], params: QParams) -> Scalar:
    """Phi_lambda at the finitely supported point (X, 0, 0, ...)."""
    return phi_limit_expansion(lam, params).schur.evaluate(X)


def phi_limit_norm(lam: Partition, params: QParams) -> Scalar:
    """
    Closed-form squared norm of Phi_lambda.

    q^{sum l_i(l_i+3-2i)} (-s)^{|l|} (-alpha beta)^{-|l|}
    (gamma q/alpha)_l (gamma q/beta)_l (delta q/alpha)_l (delta q/beta)_l / (sq;q)_{doubled l}.
    Vanishes for every nonempty lambda in the exceptional series.
    """
    ctx = params.ctx
    alpha, beta, gamma, delta = params.alpha, params.beta, params.gamma, params.delta
    q, s = ctx.q, params.s
    exponent = sum(p * (p + 3 - 2 * i) for i, p in enumerate(lam.parts, start=1))
    value = ctx.power(exponent) * (-s) ** lam.size * (-alpha * beta) ** (-lam.size)
    for z in (gamma * q / alpha, gamma * q / beta, delta * q / alpha, delta * q / beta):
        value = value * poch_diagram(z, lam, ctx)
    denominator = poch_diagram(s * q, doubled(lam), ctx)
    if denominator == 0:
        raise PoleEncountered(f"(sq;q) over the doubled diagram of {format_partition(lam)} vanishes")
    return _realify(value / denominator)


def h_univariate_norm(ell: int, N: int, params: QParams) -> Scalar:
    """
    Squared norm of phi_ell(.; alpha, beta, gamma q^{1-N}, delta q^{1-N}), relative to the total mass.

    Raises:
        PoleEncountered: If a denominator factor vanishes
    """
    ctx = params.ctx
    alpha, beta, gamma, delta = params.alpha, params.beta, params.gamma, params.delta
    s = params.s
    shift = ctx.power(2 - N)
    value = ctx.power(2 * ell) * (-alpha * beta) ** (-ell)
    for z in (gamma * shift / alpha, gamma * shift / beta, delta * shift / alpha, delta * shift / beta):
        value = value * poch(z, ell, ctx)
    value = value * poch(ctx.q, ell, ctx) * ctx.power(ell * (ell - 1) // 2)
    value = value * poch(s * ctx.power(2 - 2 * N), ell, ctx)
    denominator = poch(s * ctx.power(2 - 2 * N), 2 * ell, ctx) * poch(s * ctx.power(3 - 2 * N), 2 * ell, ctx)
    if denominator == 0:
        raise PoleEncountered(f"h_{ell}({N}) has a vanishing denominator")
    return _realify(value / denominator)


def finite_norm(lam: Partition, N: int, params: QParams) -> Scalar:
    """prod_i h_{lambda_i+N-i}(N) / h_{N-i}(N)."""
    if N < lam.length:
        raise NTooSmall(f"N={N} is smaller than the length of {format_partition(lam)}")
    value = params.ctx.one()
    for i, part in enumerate(lam.padded(N), start=1):
        if part:
            value = value * h_univariate_norm(part + N - i, N, params) / h_univariate_norm(N - i, N, params)
    return value

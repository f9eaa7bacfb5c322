"""
Verification Module

Acceptance suites behind ``qjsf verify``. Each suite checks one family of
identities against an independent oracle and returns a SuiteResult; result
rows are attached to the active reporter.

Suites:
    golden         worked expansions of I_(1), I_(1,1), I_(2) and other closed forms
    vanishing      I_{mu|N}(X_N(lambda)) = 0 whenever lambda does not contain mu
    normalization  I_{mu|N}(X_N(mu)) = H(mu)
    agreement      determinant, tableau sum and Schur expansion agree
    projection     x_N = q^{N-1} maps I_{mu|N} to I_{mu|N-1}
    expansion      phi_{lambda|N} determinant equals its Schur expansion
    orthogonality  Gram matrix of phi_{lambda|N} on a truncated lattice (BigFloat)
    fastpath       Andreief Gram equals brute-force Gram exactly
    normlimit      finite-N norms converge to the limit norm at rate ~q
    realness       Phi_lambda Schur coefficients are real and unitriangular
    exceptional    gamma = delta = 0: concentration gap shrinks, limit norms vanish

Usage:
    from symfun.verification import run_suite, SuiteOptions

    result = run_suite("vanishing", SuiteOptions(max_size=3))
    assert result.passed
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import mpmath
from loguru import logger

from config.config_loader import get_config_loader
from core.errors import ConfigurationLimitExceeded
from core.partition import EMPTY, Partition, contains, enumerate_partitions, format_partition, node_vector
from core.qseries import QContext
from core.scalar import is_real, magnitude, set_precision, to_bigfloat
from reporting.manager import ReportingManager
from symfun.bigq import (
    QParams,
    Series,
    finite_norm,
    params_from_mapping,
    phi_finite_expansion,
    phi_limit_expansion,
    phi_limit_norm,
    phi_multivariate_det,
    phi_univariate,
)
from symfun.interp import (
    h_norm,
    interp_combinatorial,
    interp_expansion,
    interp_poly_det,
    interp_poly_expansion,
    projection_consistency_check,
    schur_eval,
)
from symfun.measure import (
    build_lattice,
    concentration_diagnostic,
    gram_andreief,
    gram_bruteforce,
    norm_convergence_study,
)


GOLDEN_Q = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5))

PRINCIPAL_PROFILE = "principal_small"
COMPLEMENTARY_PROFILE = "complementary"
NORM_PROFILE = "principal_unit"
EXCEPTIONAL_PROFILE = "exceptional"


@dataclass
class SuiteOptions:
    """Size knobs shared by all suites; None means the suite's own default."""

    q: Fraction = Fraction(1, 2)
    max_size: Optional[int] = None
    N: Optional[int] = None
    K: Optional[int] = None
    seed: int = 0
    params: Optional[QParams] = None

    def size(self, default: int) -> int:
        return self.max_size if self.max_size is not None else default

    def n_max(self, default: int) -> int:
        return self.N if self.N is not None else default


@dataclass
class SuiteResult:
    """Outcome of one suite: pass flag, number of checks, failure messages and result rows."""

    name: str
    passed: bool = True
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: str = ""

    def check(self, ok: bool, description: str) -> bool:
        self.checks += 1
        if not ok:
            self.passed = False
            self.failures.append(description)
            logger.warning(f"[{self.name}] failed: {description}")
        return ok

    def to_json(self) -> Dict[str, Any]:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "summary": self.summary,
            "failures": self.failures[:50],
            "rows": self.rows,
        }


def _profile(name: str) -> QParams:
    return params_from_mapping(get_config_loader().get_param_profile(name))


def _principal(options: SuiteOptions) -> QParams:
    if options.params is not None and options.params.series is Series.PRINCIPAL:
        return options.params
    return _profile(PRINCIPAL_PROFILE)


def _random_point(rng: random.Random, avoid: List[Any]) -> Fraction:
    while True:
        x = Fraction(rng.randint(-12, 12), rng.randint(1, 7))
        if x not in avoid:
            avoid.append(x)
            return x


def _random_points(rng: random.Random, n: int, avoid: Optional[List[Any]] = None) -> List[Fraction]:
    taken = list(avoid or [])
    return [_random_point(rng, taken) for _ in range(n)]


def suite_golden(options: SuiteOptions) -> SuiteResult:
    """Closed forms: three worked interpolation expansions, S_(2,1)(1,2,3), phi_1 and the Phi_(1) norm."""
    result = SuiteResult("golden")
    one, box, column, row = EMPTY, Partition((1,)), Partition((1, 1)), Partition((2,))
    for q in GOLDEN_Q:
        ctx = QContext(q)
        expected = {
            box: {box: 1, one: -1 / (1 - q)},
            column: {column: 1, box: -q / (1 - q), one: q ** 2 / ((1 - q) * (1 - q ** 2))},
            row: {row: 1, box: -1 / (q * (1 - q)), one: 1 / (q * (1 - q) * (1 - q ** 2))},
        }
        for mu, coefficients in expected.items():
            expansion = interp_expansion(mu, ctx)
            actual = {nu: expansion.coefficient(nu) for nu in expansion.indices()}
            result.check(actual == coefficients, f"I_{format_partition(mu)} at q={q}: {actual}")
            result.rows.append({"q": q, "mu": format_partition(mu), "coefficients": list(actual.values())})

    result.check(schur_eval(Partition((2, 1)), 3, (1, 2, 3)) == 60, "S_(2,1)(1,2,3) = 60")

    params = _principal(options)
    a, b, q = params.alpha, params.beta, params.q
    c, d = params.shifted(1)
    phi1 = phi_univariate(1, params, c, d)
    constant = (1 - c * q / a) * (1 - c * q / b) / (c * (1 - c * d * q ** 2 / (a * b))) - 1 / c
    result.check(phi1.degree == 1 and phi1.is_monic(), "phi_1 is monic of degree 1")
    result.check(phi1.coeffs[0] == constant, f"phi_1 constant term {phi1.coeffs[0]}")

    s = params.s
    g, dl = params.gamma, params.delta
    norm_one = q ** 2 * (-s) / (-a * b)
    for z in (g * q / a, g * q / b, dl * q / a, dl * q / b):
        norm_one = norm_one * (1 - z)
    norm_one = norm_one / ((1 - s) * (1 - s * q) ** 2 * (1 - s * q ** 2))
    result.check(phi_limit_norm(box, params) == norm_one, "||Phi_(1)||^2 closed form")
    result.summary = f"{result.checks} closed forms"
    return result


def suite_vanishing(options: SuiteOptions) -> SuiteResult:
    """Exact zeros of I_{mu|N} at the nodes of every lambda not containing mu."""
    result = SuiteResult("vanishing")
    ctx = QContext(options.q)
    mu_size = options.size(4)
    n_max = options.n_max(6)
    lambdas = enumerate_partitions(mu_size + 2)
    for mu in enumerate_partitions(mu_size):
        for lam in lambdas:
            if contains(lam, mu):
                continue
            for N in range(max(lam.length, mu.length, 1), n_max + 1):
                value = interp_poly_det(mu, N, node_vector(lam, N, ctx.q), ctx)
                result.check(value == 0, f"I_{format_partition(mu)}|{N} at X({format_partition(lam)}) = {value}")
    result.summary = "all exact zeros" if result.passed else f"{len(result.failures)} nonzero values"
    result.rows.append({"q": options.q, "max_mu": mu_size, "N_max": n_max, "checks": result.checks})
    return result


def suite_normalization(options: SuiteOptions) -> SuiteResult:
    """I_{mu|N}(X_N(mu)) = H(mu) for two values of N."""
    result = SuiteResult("normalization")
    ctx = QContext(options.q)
    for mu in enumerate_partitions(options.size(4)):
        expected = h_norm(mu, ctx)
        for N in (max(mu.length, 1), max(mu.length, 1) + 2):
            value = interp_poly_det(mu, N, node_vector(mu, N, ctx.q), ctx)
            result.check(value == expected, f"I_{format_partition(mu)}|{N}(X(mu)) = {value}, H = {expected}")
            result.rows.append({"mu": format_partition(mu), "N": N, "value": value})
    result.summary = f"{result.checks} normalizations"
    return result


def suite_agreement(options: SuiteOptions) -> SuiteResult:
    """Determinant, reverse-tableau and Schur-expansion forms agree at random rational points."""
    result = SuiteResult("agreement")
    ctx = QContext(options.q)
    rng = random.Random(options.seed)
    for mu in enumerate_partitions(options.size(4)):
        for N in range(max(mu.length, 1), options.n_max(5) + 1):
            expansion = interp_poly_expansion(mu, N, ctx)
            for _ in range(10):
                X = _random_points(rng, N)
                by_det = interp_poly_det(mu, N, X, ctx)
                by_tableaux = interp_combinatorial(mu, N, X, ctx)
                by_schur = expansion.evaluate(X)
                result.check(
                    by_det == by_tableaux == by_schur,
                    f"I_{format_partition(mu)}|{N} at {X}: {by_det}, {by_tableaux}, {by_schur}",
                )
    result.summary = f"{result.checks} points, three forms each"
    return result


def suite_projection(options: SuiteOptions) -> SuiteResult:
    """Specializing the last variable to q^{N-1} drops N by one."""
    result = SuiteResult("projection")
    ctx = QContext(options.q)
    rng = random.Random(options.seed)
    for mu in enumerate_partitions(options.size(4)):
        for N in range(mu.length + 1, options.n_max(6) + 1):
            X = _random_points(rng, N - 1, avoid=[ctx.power(N - 1)])
            result.check(
                projection_consistency_check(mu, N, X, ctx),
                f"I_{format_partition(mu)}|{N} does not restrict at {X}",
            )
    result.summary = f"{result.checks} restrictions"
    return result


def suite_expansion(options: SuiteOptions) -> SuiteResult:
    """phi_{lambda|N} by determinant equals its Schur expansion (principal and complementary)."""
    result = SuiteResult("expansion")
    rng = random.Random(options.seed)
    for params in (_principal(options), _profile(COMPLEMENTARY_PROFILE)):
        for lam in enumerate_partitions(options.size(3)):
            for N in range(max(lam.length, 1), options.n_max(3) + 1):
                expansion = phi_finite_expansion(lam, N, params)
                for _ in range(3):
                    X = _random_points(rng, N)
                    by_det = phi_multivariate_det(lam, N, X, params)
                    by_schur = expansion.evaluate(X)
                    result.check(
                        by_det == by_schur,
                        f"phi_{format_partition(lam)}|{N} ({params.series.value}) at {X}: {by_det} vs {by_schur}",
                    )
    result.summary = f"{result.checks} evaluations"
    return result


def _gram(lambdas: List[Partition], N: int, lat) -> Any:
    try:
        return gram_bruteforce(lambdas, N, lat)
    except ConfigurationLimitExceeded as e:
        logger.warning(f"Brute-force Gram skipped for N={N}, K={lat.K} ({e}); checking the Andreief path instead")
        return gram_andreief(lambdas, N, lat)


def suite_orthogonality(options: SuiteOptions) -> SuiteResult:
    """
    Off-diagonal Gram entries vanish and diagonals match the finite norms (BigFloat).

    Brute force when the enumeration guards allow it, the Andreief path otherwise.
    """
    result = SuiteResult("orthogonality")
    previous_precision = mpmath.mp.prec
    set_precision(int(get_config_loader().get("precision_bits", default=256)))
    try:
        exact = _principal(options)
        params = exact.to_bigfloat()
        for N in range(1, options.n_max(3) + 1):
            lambdas = [lam for lam in enumerate_partitions(options.size(3)) if lam.length <= N]
            lat = build_lattice(params, K=options.K, N=N)
            gram = _gram(lambdas, N, lat)
            offdiag = gram.max_relative_offdiag()
            result.check(offdiag <= 1e-8, f"N={N}: relative off-diagonal {mpmath.nstr(offdiag, 5)}")
            for lam, value in zip(lambdas, gram.diagonal()):
                expected = finite_norm(lam, N, exact)
                error = magnitude(value - expected) / magnitude(expected)
                result.check(error <= 1e-8, f"N={N}, lambda={format_partition(lam)}: diagonal error {mpmath.nstr(error, 5)}")
            result.rows.append({
                "N": N,
                "K": lat.K,
                "method": gram.method,
                "max_relative_offdiag": offdiag,
                "tail_bound": lat.tail_bound(N),
            })
            ReportingManager.attach_rows(f"Gram N={N}", gram.rows())
    finally:
        mpmath.mp.prec = previous_precision
    result.summary = f"{result.checks} Gram checks"
    return result


def suite_fastpath(options: SuiteOptions) -> SuiteResult:
    """Andreief Gram equals brute-force Gram exactly (exact mode)."""
    result = SuiteResult("fastpath")
    params = _principal(options)
    K = options.K if options.K is not None else 8
    lat = build_lattice(params, K=K)
    for N in range(1, options.n_max(3) + 1):
        lambdas = [lam for lam in enumerate_partitions(options.size(3)) if lam.length <= N]
        brute = gram_bruteforce(lambdas, N, lat)
        fast = gram_andreief(lambdas, N, lat)
        result.check(brute.entries == fast.entries, f"N={N}, K={K}: Andreief and brute force differ")
        result.check(brute.is_symmetric(), f"N={N}: Gram matrix not symmetric")
        result.check(all(value > 0 for value in brute.diagonal()), f"N={N}: non-positive diagonal")
        result.rows.append({"N": N, "K": K, "size": len(lambdas), "equal": brute.entries == fast.entries})
    result.summary = f"{result.checks} exact comparisons"
    return result


def suite_normlimit(options: SuiteOptions) -> SuiteResult:
    """Consecutive errors of the finite norms shrink by a factor in [q/2, 2q]."""
    result = SuiteResult("normlimit")
    params = _profile(NORM_PROFILE)
    loader = get_config_loader()
    n_values = range(int(loader.get("convergence.N_min", default=6)), int(loader.get("convergence.N_max", default=12)) + 1)
    q = to_bigfloat(params.q)
    for lam in (Partition((1,)), Partition((2,)), Partition((1, 1))):
        for row in norm_convergence_study(lam, n_values, params):
            result.rows.append({"lambda": format_partition(lam), **row})
            if row["ratio"] is not None:
                result.check(
                    q / 2 <= row["ratio"] <= 2 * q,
                    f"lambda={format_partition(lam)}, N={row['N']}: ratio {mpmath.nstr(row['ratio'], 5)}",
                )
    result.summary = f"{result.checks} error ratios"
    return result


def suite_realness(options: SuiteOptions) -> SuiteResult:
    """Phi_lambda has exactly real Schur coefficients (principal series) and S_lambda coefficient 1."""
    result = SuiteResult("realness")
    candidates = [_principal(options), _profile(NORM_PROFILE)]
    for params in candidates:
        for lam in enumerate_partitions(options.size(3)):
            schur = phi_limit_expansion(lam, params).schur
            result.check(schur.coefficient(lam) == 1, f"S_{format_partition(lam)} coefficient is {schur.coefficient(lam)}")
            for nu, value in schur.items():
                result.check(is_real(value), f"Phi_{format_partition(lam)} coefficient of S_{format_partition(nu)} = {value}")
    result.summary = f"{result.checks} coefficients"
    return result


def suite_exceptional(options: SuiteOptions) -> SuiteResult:
    """gamma = delta = 0: the concentration deficit decreases and every nonempty limit norm is 0."""
    result = SuiteResult("exceptional")
    params = _profile(EXCEPTIONAL_PROFILE)
    K = options.K if options.K is not None else 8
    lat = build_lattice(params, K=K)
    rows = concentration_diagnostic([2, 4, 6], lat)
    result.rows.extend(rows)
    for earlier, later in zip(rows, rows[1:]):
        result.check(
            later["abs_gap"] < earlier["abs_gap"],
            f"deficit did not shrink from N={earlier['N']} to N={later['N']}",
        )
    for lam in enumerate_partitions(options.size(3)):
        expected = 1 if lam.is_empty() else 0
        result.check(phi_limit_norm(lam, params) == expected, f"||Phi_{format_partition(lam)}||^2 != {expected}")
    result.summary = f"{result.checks} checks"
    return result


SUITES: Dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    "golden": suite_golden,
    "vanishing": suite_vanishing,
    "normalization": suite_normalization,
    "agreement": suite_agreement,
    "projection": suite_projection,
    "expansion": suite_expansion,
    "orthogonality": suite_orthogonality,
    "fastpath": suite_fastpath,
    "normlimit": suite_normlimit,
    "realness": suite_realness,
    "exceptional": suite_exceptional,
}


def run_suite(name: str, options: Optional[SuiteOptions] = None) -> SuiteResult:
    """
    Run one suite by name ("all" runs every suite and merges the results).

    Raises:
        ValueError: If the suite name is unknown
    """
    options = options or SuiteOptions()
    if name == "all":
        merged = SuiteResult("all")
        for suite_name in SUITES:
            part = run_suite(suite_name, options)
            merged.checks += part.checks
            merged.passed = merged.passed and part.passed
            merged.failures.extend(f"{suite_name}: {failure}" for failure in part.failures)
            merged.rows.append({"suite": suite_name, "passed": part.passed, "checks": part.checks, "summary": part.summary})
        merged.summary = f"{sum(1 for row in merged.rows if row['passed'])}/{len(SUITES)} suites passed"
        return merged

    if name not in SUITES:
        raise ValueError(f"Unknown suite '{name}'. Available: all, {', '.join(SUITES)}")
    logger.info(f"Running suite '{name}'")
    result = SUITES[name](options)
    status = "✓" if result.passed else "✗"
    ReportingManager.log_info(f"{status} Suite {name}: {result.checks} checks, {result.summary}")
    ReportingManager.attach_rows(f"Suite {name}", result.rows)
    logger.info(f"{status} Suite '{name}' finished: {result.checks} checks, {len(result.failures)} failures")
    return result

"""
qjsf command line

Subcommands expose the library operations with exact rational output:

    sigma        Schur coefficient sigma(mu, nu) of I_mu
    interp       Schur expansion of I_mu (or of I_{mu|N} with --N)
    hnorm        H(mu), the value of I_mu at its own node
    eval         I_{mu|N}(x) by determinant, tableau sum or expansion
    rho          coefficient rho(lambda, mu) of Phi_lambda on I_mu(X gamma)
    phi          Phi_lambda on both bases (phi_{lambda|N} with --N)
    phinorm      limit norm of Phi_lambda (and finite-N norm with --N)
    gram         Gram matrix of phi_{lambda|N} on a truncated lattice
    converge     convergence tables (norm, phi, interp, schur)
    concentrate  exceptional-series concentration diagnostic
    verify       acceptance suites

Exit codes: 0 success, 1 internal error, 2 usage error or inadmissible parameters.

Usage:
    python qjsf.py interp --mu 2 --q 1/2 --format json
    python -m cli verify --suite vanishing --max-size 4 --q 1/2
"""

import argparse
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from loguru import logger

from cli.output import FORMATS, render
from config.config_loader import get_config_loader
from core.errors import InadmissibleParameters, PartitionParseError, QJSFError, ScalarParseError
from core.partition import Partition, enumerate_partitions, format_partition, parse_partition
from core.qseries import QContext
from core.scalar import Scalar, format_scalar, kind, parse_scalar, set_precision
from reporting.manager import ReportingManager
from symfun import bigq, interp, measure
from symfun.bigq import QParams
from symfun.verification import SUITES, SuiteOptions, run_suite


PARAM_NAMES = ("alpha", "beta", "gamma", "delta")


def scalar_arg(text: str) -> Scalar:
    try:
        return parse_scalar(text)
    except ScalarParseError as e:
        raise argparse.ArgumentTypeError(str(e))


def partition_arg(text: str) -> Partition:
    try:
        return parse_partition(text)
    except PartitionParseError as e:
        raise argparse.ArgumentTypeError(str(e))


def points_arg(text: str) -> List[Scalar]:
    """Comma-separated scalar literals."""
    try:
        return [parse_scalar(token) for token in text.split(",") if token.strip()]
    except ScalarParseError as e:
        raise argparse.ArgumentTypeError(str(e))


def ints_arg(text: str) -> List[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers, got {text!r}")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=scalar_arg, default=None, help="Base q, rational in (0, 1)")
    for name in PARAM_NAMES:
        common.add_argument(f"--{name}", type=scalar_arg, default=None, help=f"Parameter {name}")
    common.add_argument("--profile", default=None, help="Named parameter set from params.yaml")
    common.add_argument("--format", choices=FORMATS, default=None, help="Output format")
    common.add_argument("--float", action="store_true", help="BigFloat arithmetic instead of exact")
    common.add_argument("--precision", type=int, default=None, help="BigFloat precision in bits")
    common.add_argument("--log-level", default=None, help="loguru level for stderr")
    common.add_argument("--seed", type=int, default=None, help="Seed for random sweeps")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="qjsf", description="Interpolation and big q-Jacobi symmetric functions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma", parents=[common], help="Schur coefficient of I_mu")
    p.add_argument("--mu", type=partition_arg, required=True)
    p.add_argument("--nu", type=partition_arg, required=True)
    p.set_defaults(handler=cmd_sigma)

    p = sub.add_parser("interp", parents=[common], help="Schur expansion of I_mu")
    p.add_argument("--mu", type=partition_arg, required=True)
    p.add_argument("--N", type=int, default=None, help="Finite number of variables")
    p.set_defaults(handler=cmd_interp)

    p = sub.add_parser("hnorm", parents=[common], help="H(mu)")
    p.add_argument("--mu", type=partition_arg, required=True)
    p.set_defaults(handler=cmd_hnorm)

    p = sub.add_parser("eval", parents=[common], help="Evaluate I_{mu|N} at a point")
    p.add_argument("--mu", type=partition_arg, required=True)
    p.add_argument("--x", type=points_arg, required=True, help="Comma-separated point")
    p.add_argument("--N", type=int, default=None, help="Defaults to the number of coordinates")
    p.add_argument("--method", choices=("det", "comb", "expansion", "all"), default="all")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("rho", parents=[common], help="rho(lambda, mu)")
    p.add_argument("--lambda", dest="lam", type=partition_arg, required=True)
    p.add_argument("--mu", type=partition_arg, required=True)
    p.set_defaults(handler=cmd_rho)

    p = sub.add_parser("phi", parents=[common], help="Phi_lambda expansions")
    p.add_argument("--lambda", dest="lam", type=partition_arg, required=True)
    p.add_argument("--N", type=int, default=None, help="Finite-N polynomial phi_{lambda|N}")
    p.add_argument("--x", type=points_arg, default=None, help="Also evaluate at this point")
    p.set_defaults(handler=cmd_phi)

    p = sub.add_parser("phinorm", parents=[common], help="Norm of Phi_lambda")
    p.add_argument("--lambda", dest="lam", type=partition_arg, required=True)
    p.add_argument("--N", type=int, default=None, help="Also the finite-N norm")
    p.set_defaults(handler=cmd_phinorm)

    p = sub.add_parser("gram", parents=[common], help="Gram matrix on a truncated lattice")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--K", type=int, default=None, help="Truncation index (default: tail rule)")
    p.add_argument("--max-size", type=int, default=2, help="Largest |lambda| in the matrix")
    p.add_argument("--tail-tol", type=float, default=None)
    p.add_argument("--fast", action="store_true", help="Andreief path instead of brute force")
    p.set_defaults(handler=cmd_gram)

    p = sub.add_parser("converge", parents=[common], help="Convergence tables")
    p.add_argument("--table", choices=("norm", "phi", "interp", "schur"), default="norm")
    p.add_argument("--lambda", dest="lam", type=partition_arg, default=Partition((1,)))
    p.add_argument("--mu", type=partition_arg, default=Partition((1,)))
    p.add_argument("--nu", type=partition_arg, default=Partition((1,)))
    p.add_argument("--N-min", type=int, default=None)
    p.add_argument("--N-max", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--tail-tol", type=float, default=None)
    p.set_defaults(handler=cmd_converge)

    p = sub.add_parser("concentrate", parents=[common], help="Exceptional concentration diagnostic")
    p.add_argument("--N", type=ints_arg, default=[2, 4, 6], help="Comma-separated N values")
    p.add_argument("--K", type=int, default=8)
    p.set_defaults(handler=cmd_concentrate)

    p = sub.add_parser("verify", parents=[common], help="Acceptance suites")
    p.add_argument("--suite", choices=("all",) + tuple(SUITES), default="all")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--K", type=int, default=None)
    p.set_defaults(handler=cmd_verify)

    return parser


_STDERR_SINK_ID: Optional[int] = None


def _configure_logging(level: Optional[str]) -> None:
    """Replace loguru's default stderr sink (or the one from a previous run) and leave other sinks alone."""
    global _STDERR_SINK_ID
    level = (level or get_config_loader().get("log_level", default="INFO")).upper()
    try:
        logger.remove(_STDERR_SINK_ID if _STDERR_SINK_ID is not None else 0)
    except ValueError:
        pass
    _STDERR_SINK_ID = logger.add(sys.stderr, level=level, format="<level>{level: <8}</level> | {message}")


def _context(args: argparse.Namespace) -> QContext:
    q = args.q if args.q is not None else parse_scalar(str(_profile_values(args)["q"]))
    try:
        ctx = QContext(q)
    except ValueError as e:
        raise InadmissibleParameters(str(e), clause="0 < q < 1")
    return ctx.to_bigfloat() if args.float else ctx


def _profile_values(args: argparse.Namespace, default_profile: Optional[str] = None) -> Dict[str, Any]:
    loader = get_config_loader()
    name = args.profile or default_profile or loader.get_default_profile()
    return dict(loader.get_param_profile(name))


def _params(args: argparse.Namespace, default_profile: Optional[str] = None) -> QParams:
    """Profile values overridden by explicit flags, then classified."""
    explicit = {name: getattr(args, name) for name in PARAM_NAMES if getattr(args, name) is not None}
    if explicit and not args.profile and len(explicit) < len(PARAM_NAMES):
        missing = [name for name in PARAM_NAMES if name not in explicit]
        raise InadmissibleParameters(
            f"Give all of --alpha --beta --gamma --delta or a --profile (missing: {', '.join(missing)})",
            clause="complete parameter tuple",
        )
    if explicit and not args.profile:
        values: Dict[str, Any] = {"q": args.q if args.q is not None else parse_scalar("1/2")}
        values.update(explicit)
        params = bigq.classify(values["q"], values["alpha"], values["beta"], values["gamma"], values["delta"])
    else:
        values = _profile_values(args, default_profile)
        for key, value in explicit.items():
            values[key] = format_scalar(value)
        if args.q is not None:
            values["q"] = format_scalar(args.q)
        params = bigq.params_from_mapping(values)
    return params.to_bigfloat() if args.float else params


def _q_echo(ctx: QContext) -> Dict[str, str]:
    return {"q": format_scalar(ctx.q), "kind": kind(ctx.q).value}


def cmd_sigma(args: argparse.Namespace) -> Dict[str, Any]:
    ctx = _context(args)
    return {
        "params": _q_echo(ctx),
        "mu": format_partition(args.mu),
        "nu": format_partition(args.nu),
        "value": interp.sigma(args.mu, args.nu, ctx),
    }


def cmd_interp(args: argparse.Namespace) -> Dict[str, Any]:
    ctx = _context(args)
    if args.N is None:
        expansion = interp.interp_expansion(args.mu, ctx)
    else:
        expansion = interp.interp_poly_expansion(args.mu, args.N, ctx)
    payload: Dict[str, Any] = {"params": _q_echo(ctx), "mu": format_partition(args.mu), "N": args.N}
    payload.update(expansion.to_json())
    return payload


def cmd_hnorm(args: argparse.Namespace) -> Dict[str, Any]:
    ctx = _context(args)
    return {"params": _q_echo(ctx), "mu": format_partition(args.mu), "value": interp.h_norm(args.mu, ctx)}


def cmd_eval(args: argparse.Namespace) -> Dict[str, Any]:
    ctx = _context(args)
    N = args.N if args.N is not None else len(args.x)
    X = args.x
    methods: Dict[str, Callable[[], Scalar]] = {
        "det": lambda: interp.interp_poly_det(args.mu, N, X, ctx),
        "comb": lambda: interp.interp_combinatorial(args.mu, N, X, ctx),
        "expansion": lambda: interp.interp_poly_expansion(args.mu, N, ctx).evaluate(X),
    }
    chosen = list(methods) if args.method == "all" else [args.method]
    values = {name: methods[name]() for name in chosen}
    payload: Dict[str, Any] = {"params": _q_echo(ctx), "mu": format_partition(args.mu), "N": N, "x": X}
    payload.update(values)
    if len(values) > 1:
        payload["agree"] = len({format_scalar(v) for v in values.values()}) == 1
    return payload


def cmd_rho(args: argparse.Namespace) -> Dict[str, Any]:
    params = _params(args)
    return {
        "params": params.echo(),
        "lambda": format_partition(args.lam),
        "mu": format_partition(args.mu),
        "value": bigq.rho(args.lam, args.mu, params),
    }


def cmd_phi(args: argparse.Namespace) -> Dict[str, Any]:
    params = _params(args)
    payload: Dict[str, Any] = {"params": params.echo(), "lambda": format_partition(args.lam)}
    if args.N is None:
        expansion = bigq.phi_limit_expansion(args.lam, params)
        payload.update(expansion.to_json())
        if args.x is not None:
            payload["value"] = expansion.schur.evaluate(args.x)
    else:
        finite = bigq.phi_finite_expansion(args.lam, args.N, params)
        payload["N"] = args.N
        payload.update(finite.to_json())
        if args.x is not None:
            payload["value"] = bigq.phi_multivariate_det(args.lam, args.N, args.x, params)
    return payload


def cmd_phinorm(args: argparse.Namespace) -> Dict[str, Any]:
    params = _params(args)
    payload: Dict[str, Any] = {
        "params": params.echo(),
        "lambda": format_partition(args.lam),
        "limit": bigq.phi_limit_norm(args.lam, params),
    }
    if args.N is not None:
        payload["N"] = args.N
        payload["finite"] = bigq.finite_norm(args.lam, args.N, params)
    return payload


def cmd_gram(args: argparse.Namespace) -> Dict[str, Any]:
    params = _params(args)
    lat = measure.build_lattice(params, K=args.K, tail_tol=args.tail_tol, N=args.N)
    lambdas = [lam for lam in enumerate_partitions(args.max_size) if lam.length <= args.N]
    if args.fast:
        gram = measure.gram_andreief(lambdas, args.N, lat)
    else:
        gram = measure.gram_bruteforce(lambdas, args.N, lat)
    return {
        "params": params.echo(),
        "N": args.N,
        "K": lat.K,
        "method": gram.method,
        "max_relative_offdiag": gram.max_relative_offdiag(),
        "rows": gram.rows(),
    }


def _n_values(args: argparse.Namespace) -> range:
    loader = get_config_loader()
    n_min = args.N_min if args.N_min is not None else int(loader.get("convergence.N_min", default=6))
    n_max = args.N_max if args.N_max is not None else int(loader.get("convergence.N_max", default=12))
    return range(n_min, n_max + 1)


def cmd_converge(args: argparse.Namespace) -> Dict[str, Any]:
    n_values = _n_values(args)
    if args.table == "interp":
        ctx = _context(args)
        return {"params": _q_echo(ctx), "mu": format_partition(args.mu),
                "rows": interp.interp_convergence(args.mu, n_values, ctx)}

    params = _params(args)
    payload: Dict[str, Any] = {"params": params.echo(), "table": args.table}
    if args.table == "norm":
        payload["lambda"] = format_partition(args.lam)
        payload["rows"] = measure.norm_convergence_study(args.lam, n_values, params)
    elif args.table == "phi":
        payload["lambda"] = format_partition(args.lam)
        payload["rows"] = bigq.phi_coefficient_convergence(args.lam, n_values, params)
    else:
        payload["nu"] = format_partition(args.nu)
        payload["rows"] = measure.schur_moment_study(
            args.nu, n_values,
            lambda N: measure.build_lattice(params, K=args.K, tail_tol=args.tail_tol, N=N),
        )
    return payload


def cmd_concentrate(args: argparse.Namespace) -> Dict[str, Any]:
    params = _params(args, default_profile="exceptional")
    lat = measure.build_lattice(params, K=args.K)
    return {"params": params.echo(), "K": lat.K, "rows": measure.concentration_diagnostic(args.N, lat)}


def cmd_verify(args: argparse.Namespace) -> Dict[str, Any]:
    options = SuiteOptions(
        max_size=args.max_size,
        N=args.N,
        K=args.K,
        seed=args.seed if args.seed is not None else int(get_config_loader().get("default_seed", default=0)),
    )
    if args.q is not None:
        _context(args)
        options.q = args.q
    if args.profile or any(getattr(args, name) is not None for name in PARAM_NAMES):
        options.params = _params(args)
    result = run_suite(args.suite, options)
    payload = result.to_json()
    payload["exit_code"] = 0 if result.passed else 1
    return payload


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    """
    Parse ``argv``, run the subcommand and print its output.

    Returns:
        0 on success, 1 on internal errors or failed suites, 2 on usage errors
        and inadmissible parameters
    """
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    _configure_logging(args.log_level)
    loader = get_config_loader()
    set_precision(args.precision or int(loader.get("precision_bits", default=256)))
    try:
        ReportingManager.init("log")
    except ValueError as e:
        logger.warning(f"Reporter not available: {e}")

    fmt = args.format or loader.get("output_format", default="pretty")
    try:
        payload = args.handler(args)
    except InadmissibleParameters as e:
        clause = f" [{e.clause}]" if e.clause else ""
        print(f"qjsf {args.command}: inadmissible parameters{clause}: {e}", file=sys.stderr)
        return 2
    except QJSFError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 1
    except Exception as e:
        logger.exception(f"Unexpected error in '{args.command}': {e}")
        return 1

    exit_code = payload.pop("exit_code", 0)
    print(render(payload, fmt), file=stdout)
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

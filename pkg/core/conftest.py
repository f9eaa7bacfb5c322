"""
Pytest configuration for the core module.

Provides the parameter-matrix fixture, config/rng/precision fixtures and
failure reporting. All fixtures and hooks for the qjsf test suites.
"""

import logging
import random
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Generator, List, Optional

import mpmath
import pytest
from loguru import logger

from config.config_loader import ConfigLoader
from core.scalar import set_precision
from reporting.manager import ReportingManager
from symfun.bigq import QParams, params_from_mapping


_REPORTS_RUN_DIR = None
_PARAM_MATRIX: Optional[List[Dict[str, Any]]] = None


class _PropagateHandler(logging.Handler):
    """Loguru sink that hands records to stdlib logging, where pytest's log_cli and log_file pick them up."""

    def emit(self, record: logging.LogRecord) -> None:
        logging.getLogger(record.name).handle(record)


_LOG_SINK_ID: Optional[int] = None


def pytest_configure(config):
    """Route loguru into pytest logging, register markers and create the timestamped reports directory."""
    global _REPORTS_RUN_DIR, _LOG_SINK_ID
    _LOG_SINK_ID = logger.add(_PropagateHandler(), level="DEBUG", format="{message}")

    config.addinivalue_line(
        "markers",
        "series(name, ...): restrict the param_profile matrix to these series"
    )

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    reports_base = Path(__file__).parent.parent / "reports"
    _REPORTS_RUN_DIR = reports_base / f"{timestamp}"
    allure_dir = _REPORTS_RUN_DIR / "allure-results"
    allure_dir.mkdir(parents=True, exist_ok=True)
    if getattr(config.option, "allure_report_dir", None) is None:
        config.option.allure_report_dir = str(allure_dir)

    try:
        reporter_type = ConfigLoader().get("reporter", default="log")
        ReportingManager.init(reporter_type)
    except Exception as e:
        logger.warning(f"Failed to initialize ReportingManager: {e}. Falling back to log reporter.")
        ReportingManager.reset()
        ReportingManager.init("log")

    logger.info(f"Reports directory: {_REPORTS_RUN_DIR}")


def pytest_unconfigure(config):
    global _LOG_SINK_ID
    if _LOG_SINK_ID is not None:
        logger.remove(_LOG_SINK_ID)
        _LOG_SINK_ID = None


def _load_matrix() -> List[Dict[str, Any]]:
    global _PARAM_MATRIX
    if _PARAM_MATRIX is None:
        _PARAM_MATRIX = ConfigLoader().get_param_matrix()
        logger.info(
            f"Loaded parameter matrix with {len(_PARAM_MATRIX)} profiles: "
            f"{[p.get('name', 'unknown') for p in _PARAM_MATRIX]}"
        )
    return _PARAM_MATRIX


def pytest_generate_tests(metafunc):
    """
    Parametrize tests that use 'param_profile' with the params.yaml matrix at collection time.

    ``--profile NAME`` restricts the matrix to one profile; a ``series`` marker
    restricts it to profiles of the named series.
    """
    if 'param_profile' not in metafunc.fixturenames:
        return

    matrix = _load_matrix()

    marker = metafunc.definition.get_closest_marker('series')
    if marker is not None:
        matrix = [p for p in matrix if p.get('series') in marker.args]

    profile_override = metafunc.config.getoption("--profile", default=None)
    if profile_override:
        filtered = [p for p in matrix if p.get('name') == profile_override]
        if not filtered and marker is None:
            available = ", ".join(p.get('name', 'unknown') for p in matrix)
            raise ValueError(f"Profile '{profile_override}' not found in matrix. Available: {available}")
        matrix = filtered

    profile_ids = [p.get('name', f"profile_{i}") for i, p in enumerate(matrix)]
    metafunc.parametrize('param_profile', matrix, ids=profile_ids, scope='function')
    logger.debug(f"Parametrized {metafunc.function.__name__} with {len(matrix)} parameter profiles")


@pytest.fixture(scope="session")
def config() -> dict:
    """Session-scoped fixture providing loaded configuration."""
    configuration = ConfigLoader().load_config("config")
    logger.info("Configuration loaded")
    return configuration


@pytest.fixture(scope="function")
def param_profile(request) -> Dict[str, Any]:
    """
    The current parameter profile dictionary, injected by pytest_generate_tests.
    """
    if hasattr(request, 'param'):
        return request.param
    logger.warning("param_profile not parametrized, using default profile")
    loader = ConfigLoader()
    return loader.get_param_profile(loader.get_default_profile())


@pytest.fixture(scope="function")
def params(param_profile: Dict[str, Any]) -> QParams:
    """Classified exact QParams for the current profile."""
    return params_from_mapping(param_profile)


@pytest.fixture(scope="function")
def rng(request, config) -> random.Random:
    """Seeded generator for random property sweeps (--seed or config default_seed)."""
    seed = request.config.getoption("--seed", default=None)
    if seed is None:
        seed = config.get("default_seed", 0)
    logger.debug(f"Random sweep seed: {seed}")
    return random.Random(int(seed))


@pytest.fixture(scope="function")
def bigfloat_precision(config) -> Generator[int, None, None]:
    """Switch mpmath to the configured precision for one test, then restore it."""
    previous = mpmath.mp.prec
    bits = int(config.get("precision_bits", 256))
    set_precision(bits)
    yield bits
    mpmath.mp.prec = previous


@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """Session-level setup and teardown."""
    logger.info("=" * 80)
    logger.info("Test Session Started")
    logger.info("=" * 80)

    Path("logs").mkdir(parents=True, exist_ok=True)

    yield

    logger.info("=" * 80)
    logger.info("Test Session Completed")
    logger.info("=" * 80)


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Keep the per-phase report on the item and attach failures to the reporter."""
    outcome = yield
    rep = outcome.get_result()
    setattr(item, f"rep_{rep.when}", rep)
    if rep.when == "call" and rep.failed and call.excinfo is not None:
        try:
            if ReportingManager.is_initialized():
                ReportingManager.reporter().attach_exception(item.name, call.excinfo.value)
        except Exception as e:
            logger.debug(f"Could not attach failure of {item.name}: {e}")


def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--profile",
        action="store",
        default=None,
        help="Parameter profile to use (from params.yaml matrix). "
             "If not specified, all matrix profiles are used."
    )
    parser.addoption(
        "--seed",
        action="store",
        default=None,
        help="Seed for random property sweeps (defaults to config.yaml default_seed)"
    )

"""
Configuration validation script.
Run this to verify that config.yaml and params.yaml load and that every
parameter profile classifies as admissible.

Usage:
    python validate_config.py
"""

import sys

from loguru import logger

from config.config_loader import ConfigLoader
from core.errors import QJSFError
from symfun.bigq import params_from_mapping


REQUIRED_KEYS = (
    "reporter",
    "log_level",
    "precision_bits",
    "tail_tolerance",
    "exact_weight_tolerance",
    "max_configs",
    "max_bruteforce_N",
    "max_bruteforce_K",
    "max_lattice_index",
    "default_seed",
    "output_format",
)


def validate_configs() -> bool:
    """Validate all configuration files."""
    logger.info("=" * 60)
    logger.info("Configuration Validation")
    logger.info("=" * 60)

    loader = ConfigLoader()

    logger.info("1. Validating config.yaml...")
    try:
        config = loader.load_config("config")
    except Exception as e:
        logger.error(f"   ✗ Failed: {e}")
        return False
    missing = [key for key in REQUIRED_KEYS if key not in config]
    if missing:
        logger.error(f"   ✗ Missing keys: {', '.join(missing)}")
        return False
    logger.info(f"   ✓ Loaded successfully (precision {loader.get('precision_bits')} bits, "
                f"max_configs {loader.get('max_configs')})")

    logger.info("2. Validating params.yaml...")
    try:
        matrix = loader.get_param_matrix()
        default = loader.get_param_profile(loader.get_default_profile())
    except Exception as e:
        logger.error(f"   ✗ Failed: {e}")
        return False
    logger.info(f"   ✓ {len(matrix)} profiles, default '{default['name']}'")

    logger.info("3. Classifying parameter profiles...")
    for profile in matrix:
        try:
            params = params_from_mapping(profile)
        except QJSFError as e:
            logger.error(f"   ✗ {profile.get('name')}: {e}")
            return False
        declared = profile.get("series")
        if declared and declared != params.series.value:
            logger.error(f"   ✗ {profile['name']}: declared {declared}, classified {params.series.value}")
            return False
        logger.info(f"   ✓ {profile['name']}: {params.series.value}")

    logger.info("4. Testing nested key access...")
    logger.info(f"   ✓ convergence.N_max = {loader.get('convergence.N_max')}")

    logger.info("=" * 60)
    logger.info("✓ All configuration validations passed!")
    return True


if __name__ == "__main__":
    sys.exit(0 if validate_configs() else 1)

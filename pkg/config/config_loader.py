"""
Configuration Loader Module
Provides centralized configuration management for qjsf.
Loads YAML configuration files and applies environment overrides from a .env file.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv
from loguru import logger


# config.yaml keys that may be overridden from the environment
ENV_OVERRIDES: Dict[str, str] = {
    "max_configs": "QJSF_MAX_CONFIGS",
    "log_level": "QJSF_LOG_LEVEL",
    "precision_bits": "QJSF_PRECISION",
}


class ConfigLoader:
    """
    Configuration loader class for managing YAML configuration files.

    Values are looked up in the cached YAML files; the keys listed in
    ENV_OVERRIDES are first looked up in the environment, after a project
    ``.env`` file (if any) has been loaded with python-dotenv.
    """

    def __init__(self, config_dir: Optional[str] = None, env_file: Optional[str] = None):
        """
        Initialize the ConfigLoader.

        Args:
            config_dir: Path to the configuration directory.
                       Defaults to 'config' folder in project root.
            env_file: Path to a .env file. Defaults to '.env' in project root.
        """
        project_root = Path(__file__).parent.parent
        self.config_dir = Path(config_dir) if config_dir is not None else project_root / "config"

        env_path = Path(env_file) if env_file is not None else project_root / ".env"
        if env_path.exists():
            load_dotenv(env_path, override=False)
            logger.debug(f"Environment overrides loaded from: {env_path}")

        # Cache for loaded configurations
        self._config_cache: Dict[str, Dict] = {}

        logger.debug(f"ConfigLoader initialized with config directory: {self.config_dir}")

    def _load_yaml_file(self, filename: str) -> Dict[str, Any]:
        """
        Load a YAML file and return its contents as a dictionary.

        Raises:
            FileNotFoundError: If the configuration file doesn't exist
            yaml.YAMLError: If the YAML file is invalid
        """
        file_path = self.config_dir / filename

        if not file_path.exists():
            logger.error(f"Configuration file not found: {file_path}")
            raise FileNotFoundError(f"Configuration file not found: {file_path}")

        try:
            with open(file_path, 'r', encoding='utf-8') as file:
                config_data = yaml.safe_load(file)
                logger.debug(f"Successfully loaded configuration from: {filename}")
                return config_data if config_data is not None else {}
        except yaml.YAMLError as e:
            logger.error(f"Error parsing YAML file {filename}: {e}")
            raise

    def load_config(self, config_name: str = "config") -> Dict[str, Any]:
        """
        Load a configuration file by name (cached).

        Args:
            config_name: Name of the config file without extension ('config', 'params')
        """
        if config_name in self._config_cache:
            return self._config_cache[config_name]

        config_data = self._load_yaml_file(f"{config_name}.yaml")
        self._config_cache[config_name] = config_data
        logger.debug(f"Configuration '{config_name}' loaded and cached")
        return config_data

    @staticmethod
    def _env_value(key: str, current: Any) -> Any:
        variable = ENV_OVERRIDES.get(key)
        raw = os.environ.get(variable) if variable else None
        if raw is None:
            return current
        try:
            return type(current)(raw) if isinstance(current, (int, float)) and not isinstance(current, bool) else raw
        except ValueError:
            logger.warning(f"Ignoring malformed {variable}={raw!r}")
            return current

    def get(self, key: str, config_name: str = "config",
            default: Any = None) -> Any:
        """
        Get a configuration value by key with optional default.

        Supports nested keys using dot notation (e.g., 'convergence.N_max').

        Example:
            >>> config_loader = ConfigLoader()
            >>> config_loader.get('tail_tolerance', default=1e-14)
            >>> config_loader.get('convergence.N_max')
        """
        try:
            value: Any = self.load_config(config_name)
        except (FileNotFoundError, yaml.YAMLError) as e:
            logger.error(f"Error getting key '{key}' from {config_name}: {e}, returning default: {default}")
            return default

        for part in key.split('.'):
            if isinstance(value, dict) and part in value:
                value = value[part]
            else:
                logger.debug(f"Key '{key}' not found in {config_name}.yaml, returning default: {default}")
                value = default
                break

        if config_name == "config":
            value = self._env_value(key, value if value is not None else default)
        return value

    def get_all(self, config_name: str = "config") -> Dict[str, Any]:
        """Get all configuration values from a config file."""
        return self.load_config(config_name)

    def reload_config(self, config_name: str) -> Dict[str, Any]:
        """Force reload a configuration file, bypassing the cache."""
        if config_name in self._config_cache:
            logger.debug(f"Clearing cache for configuration: {config_name}")
            del self._config_cache[config_name]
        return self.load_config(config_name)

    def clear_cache(self) -> None:
        """Clear all cached configurations."""
        self._config_cache.clear()
        logger.debug("Configuration cache cleared")

    def get_param_profile(self, profile_name: str) -> Dict[str, Any]:
        """
        Get a named parameter profile (q, alpha, beta, gamma, delta) from params.yaml.

        Raises:
            ValueError: If the profile is not found
        """
        profiles = {entry["name"]: entry for entry in self.get_param_matrix()}
        if profile_name not in profiles:
            available = ", ".join(profiles)
            logger.error(f"Parameter profile '{profile_name}' not found. Available profiles: {available}")
            raise ValueError(f"Parameter profile '{profile_name}' not found. Available: {available}")
        return profiles[profile_name]

    def get_default_profile(self) -> str:
        """Name of the default parameter profile."""
        return self.get("default_profile", "params", default="principal_small")

    def get_param_matrix(self) -> List[Dict[str, Any]]:
        """
        Get the parameter matrix from params.yaml.

        Returns:
            List of profile dictionaries, each with a 'name' key

        Raises:
            ValueError: If the matrix is not properly configured
        """
        params_config = self.load_config("params")

        matrix = params_config.get("matrix")
        if not isinstance(matrix, list) or len(matrix) == 0:
            logger.error("Parameter matrix must be a non-empty list")
            raise ValueError("Parameter matrix must be a non-empty list")

        logger.debug(f"Loaded parameter matrix with {len(matrix)} profiles")
        return matrix


# Singleton instance for global access
_config_loader_instance: Optional[ConfigLoader] = None


def get_config_loader() -> ConfigLoader:
    """
    Get or create the singleton ConfigLoader instance.

    Returns:
        ConfigLoader instance
    """
    global _config_loader_instance
    if _config_loader_instance is None:
        _config_loader_instance = ConfigLoader()
    return _config_loader_instance

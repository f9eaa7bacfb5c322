"""
Golden Data Loader Module

Loads golden values (exact rational literals, partitions, expected counts)
from YAML, JSON or CSV files under test_data/. All formats are normalized to
List[Dict[str, Any]] for pytest parametrization.

Usage:
    from utils.data_loader import load_test_data, case_ids

    cases = load_test_data("test_data/sigma.yaml")

    @pytest.mark.parametrize("case", cases, ids=case_ids(cases))
    def test_sigma(case):
        ...
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, List

import yaml
from loguru import logger


ROOT_KEYS = ("tests", "data", "cases", "test_cases", "rows")


class DataLoaderError(Exception):
    """Raised when data loading or parsing fails."""
    pass


class DataLoader:
    """
    Unified loader for golden data from YAML, JSON, or CSV files.

    YAML/JSON files may hold a bare list or a mapping with one of ROOT_KEYS.
    """

    SUPPORTED_FORMATS = {".yaml", ".yml", ".json", ".csv"}

    @staticmethod
    def load(path: str) -> List[Dict[str, Any]]:
        """
        Load golden data from file. Auto-detects format by extension.

        Raises:
            DataLoaderError: If file not found, unsupported format,
                           invalid content, or empty dataset.
        """
        file_path = Path(path)
        if not file_path.exists():
            raise DataLoaderError(f"Data file not found: {file_path.absolute()}")

        suffix = file_path.suffix.lower()
        if suffix not in DataLoader.SUPPORTED_FORMATS:
            raise DataLoaderError(
                f"Unsupported file format: {suffix}. Supported: {sorted(DataLoader.SUPPORTED_FORMATS)}"
            )

        logger.debug(f"Loading golden data from: {file_path}")
        try:
            if suffix == ".csv":
                data = DataLoader._load_csv(file_path)
            else:
                with open(file_path, "r", encoding="utf-8") as f:
                    content = yaml.safe_load(f) if suffix in {".yaml", ".yml"} else json.load(f)
                data = DataLoader._unwrap(content, file_path.name)
        except DataLoaderError:
            raise
        except Exception as e:
            raise DataLoaderError(f"Error loading {suffix} file {file_path.name}: {e}")

        if not data:
            raise DataLoaderError(f"Empty dataset in {file_path.name}. Expected non-empty list of cases.")
        if not all(isinstance(item, dict) for item in data):
            raise DataLoaderError(f"Invalid data structure in {file_path.name}. Expected list of dicts.")

        logger.debug(f"Loaded {len(data)} case(s) from {file_path.name}")
        return data

    @staticmethod
    def _unwrap(content: Any, name: str) -> List[Dict[str, Any]]:
        """Accept a bare list or a mapping with a recognized root key."""
        if content is None:
            raise DataLoaderError(f"{name} is empty")
        if isinstance(content, list):
            return content
        if isinstance(content, dict):
            for key in ROOT_KEYS:
                if isinstance(content.get(key), list):
                    return content[key]
            logger.warning(f"No recognized root key in {name}. Treating entire mapping as a single case.")
            return [content]
        raise DataLoaderError(
            f"Invalid structure in {name}. Expected list or dict, got {type(content).__name__}"
        )

    @staticmethod
    def _load_csv(path: Path) -> List[Dict[str, Any]]:
        """First row is the header; every value stays a string (exact literals are parsed by the caller)."""
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None:
                raise DataLoaderError(f"CSV file {path.name} has no header row")
            rows = list(reader)
        if not rows:
            raise DataLoaderError(f"CSV file {path.name} has no data rows (only headers)")
        return rows


def load_test_data(path: str) -> List[Dict[str, Any]]:
    """
    Load golden data from an external file (YAML, JSON, or CSV).

    Relative paths are resolved from the current directory, then from the project root.

    Raises:
        DataLoaderError: On file not found, invalid format, or empty dataset.
    """
    file_path = Path(path)
    if not file_path.is_absolute() and not file_path.exists():
        file_path = Path(__file__).parent.parent / path
    return DataLoader.load(str(file_path))


def case_ids(cases: List[Dict[str, Any]], key: str = "id") -> List[str]:
    """pytest ids from a case field, falling back to the position."""
    return [str(case.get(key, index)) for index, case in enumerate(cases)]

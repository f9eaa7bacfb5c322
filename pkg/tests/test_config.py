"""
Framework tests: configuration loading, golden data loading and reporting.
"""

import io
import json
import logging
from fractions import Fraction

import pytest
import yaml
from loguru import logger

from cli.main import run
from config.config_loader import ConfigLoader, get_config_loader
from core.base_test import BaseTest
from core.scalar import GaussianRational
from reporting.allure_reporter import AllureReporter
from reporting.log_reporter import LogReporter
from reporting.manager import ReportingManager
from reporting.tables import dumps_json, rows_to_csv, to_jsonable
from utils.data_loader import DataLoader, DataLoaderError, case_ids, load_test_data


class TestConfigLoader(BaseTest):

    def test_top_level_and_nested_keys(self):
        loader = ConfigLoader()
        assert loader.get("max_bruteforce_K") == 12
        assert loader.get("convergence.N_max") == 12
        assert loader.get("convergence.missing", default="fallback") == "fallback"
        assert loader.get("no_such_key", default=3) == 3

    def test_missing_file_returns_default(self, tmp_path):
        loader = ConfigLoader(config_dir=str(tmp_path))
        assert loader.get("max_configs", default=7) == 7

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("QJSF_MAX_CONFIGS", "500")
        monkeypatch.setenv("QJSF_LOG_LEVEL", "debug")
        loader = ConfigLoader()
        assert loader.get("max_configs") == 500
        assert loader.get("log_level") == "debug"

    def test_malformed_override_is_ignored(self, monkeypatch):
        monkeypatch.setenv("QJSF_PRECISION", "many")
        assert ConfigLoader().get("precision_bits") == 256

    def test_env_file(self, tmp_path, monkeypatch):
        # registered with monkeypatch so the value load_dotenv sets is undone
        monkeypatch.setenv("QJSF_MAX_CONFIGS", "0")
        monkeypatch.delenv("QJSF_MAX_CONFIGS")
        env_file = tmp_path / ".env"
        env_file.write_text("QJSF_MAX_CONFIGS=42\n")
        loader = ConfigLoader(env_file=str(env_file))
        assert loader.get("max_configs") == 42

    def test_cache_and_reload(self):
        loader = ConfigLoader()
        first = loader.load_config("config")
        assert loader.load_config("config") is first
        assert loader.reload_config("config") is not first
        loader.clear_cache()
        assert loader.get_all("config")["reporter"] == "log"

    def test_singleton(self):
        assert get_config_loader() is get_config_loader()


class TestParamProfiles(BaseTest):

    def test_matrix(self):
        matrix = self.config_loader.get_param_matrix()
        names = [entry["name"] for entry in matrix]
        logger.info(f"Profiles: {names}")
        assert names == ["principal_small", "principal_unit", "principal_skew", "complementary", "exceptional"]
        assert {entry["series"] for entry in matrix} == {"principal", "complementary", "exceptional"}

    def test_default_profile(self):
        assert self.config_loader.get_default_profile() == "principal_small"
        profile = self.config_loader.get_param_profile("principal_small")
        assert profile["gamma"] == "1/5+1/7i"

    def test_unknown_profile(self):
        with pytest.raises(ValueError, match="not found"):
            self.config_loader.get_param_profile("nonexistent")

    def test_missing_matrix(self, tmp_path):
        (tmp_path / "params.yaml").write_text(yaml.safe_dump({
            "profiles": {"only": {"series": "exceptional", "q": "1/2", "alpha": "1", "beta": "-1",
                                  "gamma": "0", "delta": "0"}},
        }))
        loader = ConfigLoader(config_dir=str(tmp_path))
        with pytest.raises(ValueError, match="non-empty list"):
            loader.get_param_matrix()

    def test_empty_matrix(self, tmp_path):
        (tmp_path / "params.yaml").write_text("matrix: []\n")
        with pytest.raises(ValueError):
            ConfigLoader(config_dir=str(tmp_path)).get_param_matrix()


class TestDataLoader(BaseTest):

    def test_yaml_root_key(self, tmp_path):
        path = tmp_path / "cases.yaml"
        path.write_text("cases:\n  - {id: a, q: '1/2'}\n  - {id: b, q: '1/3'}\n")
        cases = load_test_data(str(path))
        assert case_ids(cases) == ["a", "b"]

    def test_json_bare_list(self, tmp_path):
        path = tmp_path / "cases.json"
        path.write_text(json.dumps([{"shape": "1", "N": 3, "count": 3}]))
        assert DataLoader.load(str(path)) == [{"shape": "1", "N": 3, "count": 3}]

    def test_csv_values_stay_strings(self, tmp_path):
        path = tmp_path / "cases.csv"
        path.write_text("id,value\nx,16/3\n")
        assert DataLoader.load(str(path)) == [{"id": "x", "value": "16/3"}]

    def test_case_ids_fallback(self):
        assert case_ids([{"id": "a"}, {"mu": "1"}]) == ["a", "1"]

    @pytest.mark.parametrize(
        "name, content",
        [
            ("missing.yaml", None),
            ("cases.txt", "id,value\n"),
            ("empty.yaml", "cases: []\n"),
            ("header_only.csv", "id,value\n"),
            ("scalars.json", "[1, 2]"),
        ],
        ids=["missing", "unsupported", "empty", "header_only", "not_dicts"],
    )
    def test_errors(self, tmp_path, name, content):
        path = tmp_path / name
        if content is not None:
            path.write_text(content)
        with pytest.raises(DataLoaderError):
            DataLoader.load(str(path))

    def test_project_relative_path(self):
        cases = load_test_data("test_data/partitions.yaml")
        assert all("partition" in case for case in cases)


class TestReporting(BaseTest):

    @pytest.fixture
    def fresh_manager(self):
        previous = ReportingManager.reporter_type() or "log"
        ReportingManager.reset()
        yield ReportingManager
        ReportingManager.reset()
        ReportingManager.init(previous)

    def test_init_log(self, fresh_manager):
        assert not fresh_manager.is_initialized()
        fresh_manager.init("LOG")
        assert isinstance(fresh_manager.reporter(), LogReporter)
        assert fresh_manager.reporter_type() == "log"

    def test_init_allure(self, fresh_manager):
        fresh_manager.init("allure")
        reporter = fresh_manager.reporter()
        assert isinstance(reporter, AllureReporter)
        reporter.log_step("Gram N=1")
        reporter.attach_table("Gram N=1", [{"lambda": "-", "mu": "-", "value_re": "1"}])
        reporter.attach_json("payload", {"value": Fraction(1, 3)})

    def test_unsupported_reporter(self, fresh_manager):
        with pytest.raises(ValueError, match="Unsupported reporter type"):
            fresh_manager.init("html")

    def test_reporter_before_init(self, fresh_manager):
        with pytest.raises(RuntimeError):
            fresh_manager.reporter()
        # safe no-ops
        fresh_manager.log_info("step")
        fresh_manager.attach_rows("table", [{"N": 1}])

    def test_log_reporter_attachments(self):
        reporter = LogReporter()
        reporter.log_step("Suite demo")
        reporter.attach_table("empty", [])
        reporter.attach_json("payload", {"value": Fraction(1, 3)})
        reporter.attach_exception("boom", ValueError("boom"))

    def test_to_jsonable(self):
        payload = {"a": Fraction(16, 3), "b": [GaussianRational(Fraction(1, 2), Fraction(-1, 2))], "c": None, "d": 3}
        assert to_jsonable(payload) == {"a": "16/3", "b": ["1/2-1/2i"], "c": None, "d": 3}
        assert json.loads(dumps_json(payload))["a"] == "16/3"

    def test_rows_to_csv(self):
        text = rows_to_csv([{"N": 1, "value": Fraction(1, 2)}, {"N": 2, "ratio": Fraction(-3, 4)}])
        assert text.splitlines() == ["N,value,ratio", "1,1/2,", "2,,-3/4"]


class TestLogging(BaseTest):
    """loguru output reaches pytest's logging capture (log_cli, log_file, caplog)."""

    def test_loguru_reaches_pytest_logging(self, caplog):
        caplog.set_level(logging.DEBUG)
        logger.debug("Gram N=3 assembled")
        assert "Gram N=3 assembled" in caplog.text

    def test_cli_run_keeps_the_pytest_sink(self, caplog):
        caplog.set_level(logging.INFO)
        assert run(["hnorm", "--mu", "1", "--q", "1/2", "--format", "json"], stdout=io.StringIO()) == 0
        logger.info("after qjsf hnorm")
        assert "after qjsf hnorm" in caplog.text, "the CLI must not drop sinks it did not add"

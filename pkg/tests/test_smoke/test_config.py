from fractions import Fraction

import pytest

from core.config import (
    DEFAULT_TOLERANCES,
    LOG_LEVEL,
    PORT,
    SUITE_NAMES,
    RunConfig,
    load_run_config,
)
from core.validators import ValidationError


class TestConfigValues:
    def test_port_is_valid(self):
        assert isinstance(PORT, int)
        assert 1024 <= PORT <= 65535

    def test_log_level_is_valid(self):
        assert LOG_LEVEL in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

    def test_suite_order(self):
        assert SUITE_NAMES[0] == "scalar"
        assert SUITE_NAMES[-1] == "spectral"

    def test_default_tolerances(self):
        assert DEFAULT_TOLERANCES["eigen"] == 1e-12
        assert DEFAULT_TOLERANCES["operator"] == 1e-10
        assert DEFAULT_TOLERANCES["residue"] == 1e-3


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.q0 == Fraction(1, 2)
        assert config.output_format == "json"
        assert config.suites == SUITE_NAMES

    def test_tolerance_fallback(self):
        config = RunConfig(tolerances={})
        assert config.tolerance("zeta") == DEFAULT_TOLERANCES["zeta"]

    def test_with_overrides(self):
        config = RunConfig().with_overrides(seed=11)
        assert config.seed == 11


class TestLoadRunConfig:
    def test_overrides_win(self):
        config = load_run_config(overrides={"q0": "0.3", "seed": "9", "suites": "haar,scalar"})
        assert config.q0 == Fraction(3, 10)
        assert config.seed == 9
        assert config.suites == ("scalar", "haar")

    def test_none_override_ignored(self):
        config = load_run_config(overrides={"q0": None})
        assert config.q0 == Fraction(1, 2)

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("q0 = 7/10\ncutoff = 4\ntol_eigen = 1e-10\n")
        config = load_run_config(path)
        assert config.q0 == Fraction(7, 10)
        assert config.cutoff == 4
        assert config.tolerance("eigen") == 1e-10

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("colour = blue\n")
        with pytest.raises(ValidationError) as exc:
            load_run_config(path)
        assert exc.value.error_code == "UNKNOWN_KEY"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError) as exc:
            load_run_config(tmp_path / "absent.conf")
        assert exc.value.error_code == "CONFIG_MISSING"

    def test_bad_q0(self):
        with pytest.raises(ValidationError):
            load_run_config(overrides={"q0": "1"})

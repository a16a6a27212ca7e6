"""Tests for settings loading."""

import pytest

from nckit.core.config_manager import ConfigManager
from nckit.core.exceptions import ConfigurationError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    """Run each test in an empty directory without NCKIT_* variables."""
    monkeypatch.chdir(tmp_path)
    for name in ("LOG_LEVEL", "VALUATION_BUDGET", "SAT_NODE_BUDGET", "DEFAULT_MAX_WORLDS"):
        monkeypatch.delenv(f"NCKIT_{name}", raising=False)


def test_defaults():
    """Test settings without file or environment."""
    manager = ConfigManager()
    assert manager.config_file is None
    assert manager.settings.log_level == "WARNING"
    assert manager.settings.valuation_budget == 2**20
    assert manager.settings.default_max_worlds == 3


def test_environment_overrides_defaults(monkeypatch):
    """Test NCKIT_* variables."""
    monkeypatch.setenv("NCKIT_VALUATION_BUDGET", "64")
    monkeypatch.setenv("NCKIT_LOG_LEVEL", "debug")
    settings = ConfigManager().settings
    assert settings.valuation_budget == 64
    assert settings.log_level == "DEBUG"


def test_file_overrides_environment(monkeypatch, tmp_path):
    """Test the YAML file wins over the environment."""
    monkeypatch.setenv("NCKIT_DEFAULT_MAX_WORLDS", "2")
    config = tmp_path / "custom.yaml"
    config.write_text("default_max_worlds: 4\nsat_node_budget: 100000\n")
    manager = ConfigManager(config)
    assert manager.get("default_max_worlds") == 4
    assert manager.get("sat_node_budget") == 100000


def test_default_file_is_picked_up(tmp_path):
    """Test nckit.yaml in the working directory is read."""
    (tmp_path / "nckit.yaml").write_text("log_level: info\n")
    manager = ConfigManager()
    assert manager.config_file.name == "nckit.yaml"
    assert manager.settings.log_level == "INFO"


def test_get_unknown_key():
    """Test get falls back to the default."""
    assert ConfigManager().get("no_such_setting", 5) == 5


@pytest.mark.parametrize(
    "content",
    [
        "log_level: loud\n",
        "truth_table_max_atoms: 40\n",
        "valuation_budget: 0\n",
        "- just\n- a list\n",
        "key: [unclosed\n",
    ],
)
def test_invalid_files(tmp_path, content):
    """Test unusable files raise ConfigurationError."""
    config = tmp_path / "bad.yaml"
    config.write_text(content)
    with pytest.raises(ConfigurationError):
        ConfigManager(config)


def test_missing_file(tmp_path):
    """Test an explicit path that does not exist."""
    with pytest.raises(ConfigurationError):
        ConfigManager(tmp_path / "absent.yaml")


def test_empty_file(tmp_path):
    """Test an empty file leaves the defaults."""
    config = tmp_path / "empty.yaml"
    config.write_text("")
    assert ConfigManager(config).settings.default_max_worlds == 3


class TestValidateConfiguration:
    """Consistency report."""

    def test_valid(self):
        """Test defaults are consistent."""
        result = ConfigManager().validate_configuration()
        assert result["status"] == "valid"
        assert result["issues"] == []
        assert result["settings"]["sat_node_budget"] == 2_000_000

    def test_unknown_keys_warn(self, tmp_path):
        """Test unknown keys are ignored with a warning."""
        config = tmp_path / "extra.yaml"
        config.write_text("color: blue\n")
        result = ConfigManager(config).validate_configuration()
        assert result["status"] == "valid"
        assert "Unknown configuration key: color" in result["warnings"]
        assert result["config_file"] == str(config)

    def test_node_budget_below_relation_count(self, tmp_path):
        """Test a node budget that cannot cover the default search is an issue."""
        config = tmp_path / "small.yaml"
        config.write_text("sat_node_budget: 100\n")
        result = ConfigManager(config).validate_configuration()
        assert result["status"] == "invalid"
        assert "sat_node_budget 100" in result["issues"][0]

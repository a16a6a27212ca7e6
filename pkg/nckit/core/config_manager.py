"""
Configuration Manager - settings loading for nckit.

Defaults live on the ``Settings`` model; ``NCKIT_*`` environment variables and
a ``.env`` file override them, and an optional YAML file overrides both.
Command-line flags are applied last by the CLI itself.
"""

import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigurationError


DEFAULT_CONFIG_FILE = "nckit.yaml"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class Settings(BaseSettings):
    """Runtime settings."""

    model_config = SettingsConfigDict(
        env_prefix="NCKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    log_level: str = "WARNING"

    # Enumeration caps
    valuation_budget: int = Field(default=2**20, ge=1)
    sat_node_budget: int = Field(default=2_000_000, ge=1)
    truth_table_max_atoms: int = Field(default=22, ge=1, le=30)

    default_max_worlds: int = Field(default=3, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}")
        return level


class ConfigManager:
    """Loads settings from defaults, environment and an optional YAML file."""

    def __init__(self, config_file: Path | str | None = None) -> None:
        """Initialize configuration manager.

        Args:
            config_file: YAML file to read. When omitted, ``nckit.yaml`` in the
                working directory is used if it exists.

        Raises:
            ConfigurationError: if the file is unreadable, is not a YAML
                mapping, or holds invalid values.
        """
        self.logger = logging.getLogger(__name__)
        self.config_file = self._resolve(config_file)
        self._file_values: dict[str, Any] = self._load_file()
        try:
            known = {k: v for k, v in self._file_values.items() if k in Settings.model_fields}
            self.settings = Settings(**known)
        except ValidationError as e:
            raise ConfigurationError(f"invalid configuration: {e}") from e

    @staticmethod
    def _resolve(config_file: Path | str | None) -> Path | None:
        if config_file is not None:
            return Path(config_file)
        default = Path.cwd() / DEFAULT_CONFIG_FILE
        return default if default.exists() else None

    def _load_file(self) -> dict[str, Any]:
        if self.config_file is None:
            return {}
        try:
            with open(self.config_file, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(f"cannot load {self.config_file}: {e}") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigurationError(f"{self.config_file} must contain a mapping")
        self.logger.debug(f"Loaded configuration from {self.config_file}")
        return data

    def get(self, key: str, default: Any = None) -> Any:
        """Setting value by name, or ``default`` when there is no such setting."""
        return getattr(self.settings, key, default)

    def validate_configuration(self) -> dict[str, Any]:
        """Validate loaded configuration for consistency.

        Returns:
            Validation results with status, issues and warnings
        """
        issues: list[str] = []
        warnings = [
            f"Unknown configuration key: {key}"
            for key in self._file_values
            if key not in Settings.model_fields
        ]

        if self.settings.truth_table_max_atoms > 26:
            warnings.append("truth_table_max_atoms above 26 allocates very large tables")
        if self.settings.valuation_budget > 2**26:
            warnings.append("valuation_budget above 2^26 can make validity checks very slow")
        if 1 << (self.settings.default_max_worlds**2) > self.settings.sat_node_budget:
            issues.append(
                f"sat_node_budget {self.settings.sat_node_budget} cannot cover the relations "
                f"on default_max_worlds={self.settings.default_max_worlds} worlds",
            )

        return {
            "status": "valid" if not issues else "invalid",
            "issues": issues,
            "warnings": warnings,
            "config_file": str(self.config_file) if self.config_file else None,
            "settings": self.settings.model_dump(),
        }

"""
Runtime configuration for aperiodic_rs.

Settings come from built-in defaults, an optional YAML or JSON file, the
APERIODIC_* environment variables and finally explicit overrides (CLI flags),
in that order of priority.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger("aperiodic_rs.config")

DEFAULT_MAX_LEVEL = 24
FIXTURE_PATH = Path(__file__).parent / "fixtures" / "acceptance.yaml"


class Settings(BaseModel):
    """Tunable limits and defaults shared by the library and the CLI."""

    max_level_terms: int = Field(2 ** DEFAULT_MAX_LEVEL, description="Largest admissible n**k")
    grid_size: int = Field(4096, description="Default number of unit-circle grid points")
    max_lag: int = Field(64, description="Default largest autocorrelation lag")
    workers: int = Field(1, description="Worker threads for grid and check evaluation")
    chunk_size: int = Field(64, description="Grid points evaluated per block")
    tau_corr: Optional[float] = Field(None, description="Correlation threshold; fixture value if unset")
    log_level: str = "INFO"

    @field_validator("max_level_terms", "grid_size", "workers", "chunk_size")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value

    @field_validator("log_level")
    @classmethod
    def _level_name(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value}")
        return value

    def check_level(self, order: int, level: int) -> None:
        """Raise LevelCapError unless order**level fits the coefficient cap."""
        from .errors import LevelCapError

        if order ** level > self.max_level_terms:
            raise LevelCapError(
                f"level {level} at order {order} needs {order ** level} coefficients, "
                f"cap is {self.max_level_terms} (raise it with APERIODIC_MAX_LEVEL or --max-level)"
            )


def load_config_file(path: str) -> Dict[str, Any]:
    """Load a configuration mapping from a YAML or JSON file.

    Args:
        path: The path to the configuration file.

    Returns:
        The configuration as a dictionary (empty for unknown formats).
    """
    with open(path, "r", encoding="utf-8") as f:
        if path.endswith(".yaml") or path.endswith(".yml"):
            return yaml.safe_load(f) or {}
        elif path.endswith(".json"):
            return json.load(f)
        else:
            logger.warning(f"Unknown configuration file format: {path}")
            return {}


def _env_overrides() -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    if "APERIODIC_MAX_LEVEL" in os.environ:
        overrides["max_level_terms"] = 2 ** int(os.environ["APERIODIC_MAX_LEVEL"])
    if "APERIODIC_GRID" in os.environ:
        overrides["grid_size"] = int(os.environ["APERIODIC_GRID"])
    if "APERIODIC_WORKERS" in os.environ:
        overrides["workers"] = int(os.environ["APERIODIC_WORKERS"])
    return overrides


def load_settings(config_file: Optional[str] = None, **overrides: Any) -> Settings:
    """Build Settings from file, environment and explicit overrides.

    Args:
        config_file: Optional YAML/JSON file; falls back to APERIODIC_CONFIG.
        **overrides: Explicit values; None entries are ignored.

    Returns:
        The merged settings.
    """
    values: Dict[str, Any] = {}

    config_file = config_file or os.environ.get("APERIODIC_CONFIG")
    if config_file:
        logger.debug(f"Loading configuration from {config_file}")
        values.update(load_config_file(config_file))

    values.update(_env_overrides())
    values.update({key: value for key, value in overrides.items() if value is not None})
    return Settings(**values)


def load_acceptance_fixture(path: Optional[Path] = None) -> Dict[str, Any]:
    """Read the acceptance fixture holding the calibrated correlation threshold."""
    path = path or FIXTURE_PATH
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f) or {}


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the process-wide settings, loading them on first use."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def set_settings(settings: Optional[Settings]) -> None:
    """Replace the process-wide settings; None reloads them on next use."""
    global _settings
    _settings = settings

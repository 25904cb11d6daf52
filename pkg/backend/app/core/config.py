"""
backend/app/core/config.py

Application Configuration Loader

Loads and manages application settings from environment variables
using Pydantic's BaseSettings with `.env` support, and reads the
structured YAML run configuration used by the CLI:
- Settings: process-wide knobs (logging, worker pool, component table override)
- RunConfig: per-run hardware, regime, estimator parameters and output selection
"""

import logging
from pathlib import Path
from typing import Any, Literal

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.core.exceptions import ConfigError

# ---------------------------------------------------
# Logger Configuration
# ---------------------------------------------------
logger = logging.getLogger(__name__)
# Load environment variables from `.env` file
load_dotenv(override=False)
# ---------------------------------------------------
# Base Directory Calculation
# ---------------------------------------------------
BASE_DIR = Path(__file__).resolve().parent.parent.parent
DEFAULT_DOTENV_PATH = BASE_DIR / ".env"


# ---------------------------------------------------
# Settings Definition
# ---------------------------------------------------
class Settings(BaseSettings):
    """
    Application-wide settings loaded from environment variables.
    """

    # --- Pydantic Settings Configuration ---
    model_config = SettingsConfigDict(
        env_file=str(DEFAULT_DOTENV_PATH),
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # --- General Application Settings ---
    APP_NAME: str = "QLDPC Cost Model"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    LOG_DIR: str = "logs"
    LOG_TO_FILE: bool = False

    # --- Computation Settings ---
    WORKERS: int = Field(default=1, ge=1, description="Worker processes for sweeps")
    DEFAULT_SEED: int = 0
    COMPONENTS_FILE: str | None = None

    # --- CORS Settings ---
    CORS_ALLOWED_ORIGINS: str = ""

    # --- Calculated Properties ---
    @property
    def cors_origins(self) -> list[str]:
        """Parses the CORS_ALLOWED_ORIGINS string into a list."""
        if not self.CORS_ALLOWED_ORIGINS:
            return []
        return [origin.strip() for origin in self.CORS_ALLOWED_ORIGINS.split(",") if origin.strip()]

    @property
    def log_path(self) -> Path:
        """Returns the absolute path of the log directory."""
        path = Path(self.LOG_DIR)
        return path if path.is_absolute() else BASE_DIR / path


# ---------------------------------------------------
# Instantiate Settings Globally
# ---------------------------------------------------
settings = Settings()


# ---------------------------------------------------
# Run Configuration (YAML)
# ---------------------------------------------------
class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HardwareSection(_Section):
    p: float = Field(1e-3, gt=0, lt=1, description="Physical error rate")
    t_c: float = Field(1e-6, gt=0, description="Code cycle time in seconds")


class FHSection(_Section):
    L: int = Field(16, ge=2, description="Even lattice side")
    u: Literal[4, 8] = 4
    W: float | None = Field(None, gt=0, description="Trotter error bound")
    x: float | None = Field(None, gt=0, lt=1, description="Error budget split")
    t_override: float | None = Field(8.0e6, gt=0, description="Logical cycle count override")


class RSASection(_Section):
    n_bits: int = 2048
    s: int | None = None
    f: int | None = None
    ell: int | None = None
    w3: int | None = None
    w4: int | None = None
    rho: int | None = None
    m: int | None = Field(None, description="Input register size; default from n_bits and s")
    objective: Literal["min-qubits", "min-runtime"] = "min-qubits"
    runtime_cap: float | None = Field(None, gt=0, description="Seconds")
    qubit_cap: int | None = Field(None, gt=0)
    rho_strategy: Literal["geometric", "full"] = "geometric"


class OutputSection(_Section):
    path: str | None = None
    format: Literal["json", "csv"] | None = None


class RunConfig(_Section):
    """Structured run configuration; every field has a default."""

    hardware: HardwareSection = Field(default_factory=HardwareSection)
    regime: Literal["1e-3", "1e-4"] | None = None
    fh: FHSection = Field(default_factory=FHSection)
    rsa: RSASection = Field(default_factory=RSASection)
    components_file: str | None = None
    output: OutputSection = Field(default_factory=OutputSection)
    seed: int | None = None
    workers: int | None = Field(None, ge=1)


def _offending_key(error: dict[str, Any]) -> str:
    return ".".join(str(part) for part in error.get("loc", ())) or "<root>"


def load_run_config(path: str | Path | None) -> RunConfig:
    """
    Reads a YAML run configuration.

    Args:
        path: YAML file path, or None for all defaults.

    Returns:
        RunConfig: Validated configuration.

    Raises:
        ConfigError: Unreadable file, malformed YAML, or an unknown/invalid key
            (the offending key is named in the message).
    """
    if path is None:
        return RunConfig()
    config_path = Path(path)
    try:
        raw = yaml.safe_load(config_path.read_text(encoding="utf-8")) or {}
    except OSError as e:
        raise ConfigError(f"Cannot read config file {config_path}: {e}", path=str(config_path))
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in {config_path}: {e}", path=str(config_path))
    if not isinstance(raw, dict):
        raise ConfigError(f"Config root in {config_path} must be a mapping", path=str(config_path))

    try:
        config = RunConfig.model_validate(raw)
    except PydanticValidationError as e:
        first = e.errors()[0]
        key = _offending_key(dict(first))
        if first.get("type") == "extra_forbidden":
            message = f"Unknown config key '{key}' in {config_path}"
        else:
            message = f"Invalid value for config key '{key}' in {config_path}: {first.get('msg')}"
        raise ConfigError(message, key=key, path=str(config_path))

    logger.info(f"[CONFIG] Loaded run configuration from {config_path}")
    return config

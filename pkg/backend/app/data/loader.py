"""
backend/app/data/loader.py

Component Table Loader

Parses the versioned component table (`components.yaml`) into pydantic
models. A user file replaces whole top-level sections of the built-in table.
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from app.core.config import settings
from app.core.exceptions import ConfigError

logger = logging.getLogger(__name__)

BUILTIN_COMPONENTS = Path(__file__).resolve().parent / "components.yaml"
SUPPORTED_VERSIONS = {1}


# ---------------------------------------------------
# Table Rows
# ---------------------------------------------------
class _Row(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)


class CodeRow(_Row):
    """One generalised bicycle family member with its published block costs."""

    m: int = Field(..., ge=2)
    l: int = Field(..., ge=2)  # noqa: E741
    A: tuple[int, ...]
    B: tuple[int, ...]
    k: int
    d: int
    n_g: int
    n_b: int
    n_pb: int

    @property
    def n(self) -> int:
        return 2 * self.l

    @property
    def n_cb(self) -> int:
        return 2 * self.n


class MagicEngineRow(_Row):
    p: float
    d_e: int
    n_cb: int
    n_g: int
    n_a: int
    d_a: int
    n_alpha: int
    n_me: int
    p_r: float = Field(..., ge=0, lt=1)
    r: int
    p_T: float
    p_in: float


class FitParam(_Row):
    value: float
    plus: float = 0.0
    minus: float = 0.0

    @property
    def low(self) -> float:
        return self.value - self.minus

    @property
    def high(self) -> float:
        return self.value + self.plus


class FitRow(_Row):
    A: FitParam
    B: FitParam
    C: FitParam


class RegimeCodes(_Row):
    fermi_hubbard: dict[str, int]
    rsa: dict[str, int]


class ComponentTable(_Row):
    """Whole component table."""

    version: int
    codes: tuple[CodeRow, ...]
    magic_engines: dict[str, MagicEngineRow]
    regime_codes: RegimeCodes
    error_fits: dict[str, FitRow]

    @model_validator(mode="after")
    def _check(self) -> "ComponentTable":
        if self.version not in SUPPORTED_VERSIONS:
            raise ValueError(f"unsupported component table version {self.version}")
        return self

    def code_row(self, m: int) -> CodeRow:
        for row in self.codes:
            if row.m == m:
                return row
        raise KeyError(m)

    def code_row_by_distance(self, d: int) -> CodeRow:
        for row in self.codes:
            if row.d == d:
                return row
        raise KeyError(d)


# ---------------------------------------------------
# Loading
# ---------------------------------------------------
def _read_yaml(path: Path) -> dict[str, Any]:
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except OSError as e:
        raise ConfigError(f"Cannot read component table {path}: {e}", path=str(path))
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in component table {path}: {e}", path=str(path))
    if not isinstance(raw, dict):
        raise ConfigError(f"Component table {path} must be a mapping", path=str(path))
    return raw


@lru_cache(maxsize=8)
def _load(override: str | None) -> ComponentTable:
    data = _read_yaml(BUILTIN_COMPONENTS)
    if override:
        user = _read_yaml(Path(override))
        unknown = set(user) - set(data)
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f"Unknown component table key '{key}' in {override}", key=key)
        data.update(user)
        logger.info(f"[CONFIG] Component table sections {sorted(user)} overridden from {override}")
    try:
        return ComponentTable.model_validate(data)
    except PydanticValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first.get("loc", ()))
        raise ConfigError(f"Invalid component table entry '{key}': {first.get('msg')}", key=key)


def load_components(path: str | Path | None = None) -> ComponentTable:
    """
    Returns the component table, cached per override path.

    Args:
        path: Optional override file; defaults to settings.COMPONENTS_FILE.
    """
    override = path if path is not None else settings.COMPONENTS_FILE
    return _load(str(override) if override else None)

"""
backend/app/cli/io.py

CLI File I/O

Readers and writers behind the command-line surface:
- matrix text files (one row of 0/1 per line, spaces optional)
- deterministic JSON (field order kept, floats at 6 significant digits)
- deterministic CSV (header row, comma separated, no locale formatting)
"""

import csv
import io
import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from app.core.exceptions import ConfigError, DimensionMismatchError
from app.core.formatting import format_float, normalize
from app.gf2.symplectic import SymplecticMat

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


# ---------------------------------------------------
# Readers
# ---------------------------------------------------
def parse_matrix(text: str) -> SymplecticMat:
    """
    Parses rows of 0/1 digits; blank lines and `#` comments are skipped.

    Raises:
        DimensionMismatchError: non-binary entries or a non-square, odd-sized matrix.
    """
    rows: list[list[int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace(" ", "").replace(",", "").strip()
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise DimensionMismatchError(f"Line {number}: matrix entries must be 0 or 1")
        rows.append([int(ch) for ch in line])
    return SymplecticMat.from_lists(rows)


def read_matrix(path: str | Path) -> SymplecticMat:
    """
    Raises:
        ConfigError: unreadable file (path in the message).
        DimensionMismatchError: malformed matrix.
    """
    matrix_path = Path(path)
    try:
        text = matrix_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read matrix file {matrix_path}: {e}", path=str(matrix_path))
    return parse_matrix(text)


# ---------------------------------------------------
# Serialisation
# ---------------------------------------------------
def to_plain(value: Any) -> Any:
    """Pydantic models and enums to JSON-ready builtins, floats normalised."""
    if isinstance(value, BaseModel):
        return normalize(value.model_dump(mode="json"))
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    return normalize(value)


def render_json(data: Any) -> str:
    return json.dumps(to_plain(data), indent=2, allow_nan=True) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def render_csv(rows: Iterable[Any], columns: Sequence[str] | None = None) -> str:
    """
    One row per record; columns default to the first record's keys.

    Records may be pydantic models or mappings.
    """
    records: list[Mapping[str, Any]] = [
        row.model_dump(mode="json") if isinstance(row, BaseModel) else row for row in rows
    ]
    header = list(columns) if columns is not None else list(records[0]) if records else []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for record in records:
        writer.writerow([_cell(record.get(column)) for column in header])
    return buffer.getvalue()


def write_output(text: str, path: str | Path | None) -> None:
    """
    Writes the artifact to a file; a None path leaves stdout to the caller.

    Raises:
        ConfigError: unwritable output path.
    """
    if path is None:
        return
    out = Path(path)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot write output file {out}: {e}", path=str(out))
    logger.info(f"[CLI] wrote {len(text)} bytes to {out}")

"""
backend/app/cleaning/schemas.py

Cleaning Schemas
Pydantic schemas for Clifford frame cleaning requests and results:
- Cleaning mode (general or port)
- Request carrying the frame matrix and prefix width
- Response with rotation axes, residual frame and emitted count
"""

from enum import Enum

from pydantic import BaseModel, Field


# ---------------------------------------------------
# Cleaning Mode Enumeration
# ---------------------------------------------------
class CleaningMode(str, Enum):
    """
    Which cleaning procedure to run.

    Values:
    - GENERAL: arbitrary frame, at most 4w rotations
    - PORT: control-only frame, at most 2w rotations
    """

    GENERAL = "general"
    PORT = "port"


# ---------------------------------------------------
# Request / Response
# ---------------------------------------------------
class CleanRequest(BaseModel):
    """Frame matrix (rows of 0/1) and the number of leading qubits to clean."""

    rows: list[list[int]] = Field(..., description="2n rows of 2n bits each")
    w: int = Field(..., ge=1, description="Number of leading qubits to clean")
    mode: CleaningMode = Field(CleaningMode.GENERAL, description="Cleaning procedure")
    verify: bool = Field(False, description="Replay the rotations and check the residual")


class CleanResponse(BaseModel):
    """Emitted rotations in application order plus the residual frame."""

    n: int = Field(..., description="Qubit count")
    w: int = Field(..., description="Cleaned prefix width")
    mode: CleaningMode
    emitted_count: int = Field(..., description="Number of pi/4 rotations emitted")
    bound: int = Field(..., description="Guaranteed upper bound (4w or 2w)")
    rotations: list[str] = Field(..., description="Rotation axes as Pauli strings")
    residual: list[list[int]] = Field(..., description="Residual frame rows")
    verified: bool | None = Field(None, description="Replay check result, when requested")

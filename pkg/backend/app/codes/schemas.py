"""
backend/app/codes/schemas.py

Code Schemas
Pydantic schemas for generalised bicycle code reports:
- Distance search method
- Block cost breakdown per family member
- Verified parameter row (the `codes` table)
"""

from enum import Enum

from pydantic import BaseModel, Field


class DistanceMethod(str, Enum):
    """
    How a distance figure was obtained.

    Values:
    - EXHAUSTIVE: full kernel enumeration (exact)
    - RANDOMIZED: information-set sampling (upper bound)
    - NONE: not checked
    """

    EXHAUSTIVE = "exhaustive"
    RANDOMIZED = "randomized"
    NONE = "none"


class BlockCostsRead(BaseModel):
    """Physical qubits of one processing block."""

    m: int = Field(..., description="Family index")
    n_cb: int = Field(..., description="Code block qubits (data + check)")
    n_g: int = Field(..., description="Gadget qubits")
    n_b: int = Field(..., description="Bridge qubits")
    n_pb: int = Field(..., description="n_cb + 4 n_g + 4 n_b")


class CodeRead(BaseModel):
    """One verified row of the code family table."""

    m: int
    l: int  # noqa: E741
    n: int
    k: int = Field(..., description="Logical qubits from GF(2) ranks")
    d_claimed: int = Field(..., description="Published distance")
    d_verified_or_bound: int | None = Field(None, description="Exact distance or upper bound")
    d_method: DistanceMethod = DistanceMethod.NONE
    d_t: int = Field(..., description="Code cycles per logical cycle (d + 2)")
    css_ok: bool
    weights_ok: bool
    shift_invariant: bool
    n_cb: int
    n_g: int
    n_b: int
    n_pb: int

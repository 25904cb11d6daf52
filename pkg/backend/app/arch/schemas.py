"""
backend/app/arch/schemas.py

Architecture Schemas
Enumerations and pydantic models for the component cost models:
- Regime: physical error-rate regime (1e-3 or 1e-4)
- Experiment: which fitted error ansatz to use
- HardwareProfile: physical error rate and code cycle time
- Read models for error-rate tables and magic engines
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


# ---------------------------------------------------
# Enumerations
# ---------------------------------------------------
class Regime(str, Enum):
    """
    Physical error-rate regime.

    Values:
    - P_1E3: p = 1e-3
    - P_1E4: p = 1e-4
    """

    P_1E3 = "1e-3"
    P_1E4 = "1e-4"

    @property
    def p(self) -> float:
        return float(self.value)

    @classmethod
    def from_p(cls, p: float) -> "Regime":
        """Nearest regime on a log scale."""
        return cls.P_1E3 if p > 10**-3.5 else cls.P_1E4


class Experiment(str, Enum):
    """
    Fitted error ansatz.

    Values:
    - MEMORY
    - LOGICAL_MEASUREMENT
    """

    MEMORY = "memory"
    LOGICAL_MEASUREMENT = "logical-measurement"


# ---------------------------------------------------
# Hardware Profile
# ---------------------------------------------------
REACTION_CYCLES = 10


class HardwareProfile(BaseModel):
    """Physical error rate p and code cycle time t_c; reaction time is 10 t_c."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(1e-3, gt=0, lt=1, description="Physical error rate")
    t_c: float = Field(1e-6, gt=0, description="Code cycle time in seconds")

    @property
    def t_r(self) -> float:
        return REACTION_CYCLES * self.t_c

    @property
    def regime(self) -> Regime:
        return Regime.from_p(self.p)

    def logical_cycle_time(self, d_t: int) -> float:
        """t_l = d_t · t_c."""
        return d_t * self.t_c

    def reaction_limited(self, d_t: int) -> bool:
        """True when a logical cycle is shorter than the reaction time."""
        return d_t < REACTION_CYCLES


# ---------------------------------------------------
# Read Models
# ---------------------------------------------------
class ErrorRateRead(BaseModel):
    """Logical error rate per logical qubit and logical cycle."""

    experiment: Experiment
    p: float
    d: int
    k: int
    p_L: float = Field(..., description="Central estimate")
    p_L_optimistic: float | None = None
    p_L_pessimistic: float | None = None


class MagicEngineRead(BaseModel):
    """Magic engine bookkeeping for one regime."""

    regime: Regime
    n_me: int = Field(..., description="Physical qubits")
    n_me_recomputed: int = Field(..., description="n_cb + 16 n_g + 60 (n_a + d_a - 1) + n_alpha")
    n_cb: int
    n_g: int
    n_a: int
    d_a: int
    n_alpha: int
    d_e: int = Field(..., description="Distance of the engine's code block")
    r: int = Field(..., description="Injection rounds")
    p_r: float = Field(..., description="Rejection probability per logical cycle")
    alpha: float = Field(..., description="Expected cycles per T state, 1/(1-p_r)")
    p_T: float = Field(..., description="Output T-state infidelity")
    p_in: float
    distilled_infidelity: float = Field(..., description="35 p_in^3")

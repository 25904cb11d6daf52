"""
backend/app/estimators/schemas.py

Estimator Schemas
Parameter and result models for the application resource estimates:
- Fermi-Hubbard ground-state energy parameters
- Parallelised RSA factoring parameters and optimiser objectives
- ResourceEstimate shared by both applications
- Request/response models for the estimate endpoints and CLI sweeps
"""

import math
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from app.arch.schemas import Regime


# ---------------------------------------------------
# Enumerations
# ---------------------------------------------------
class Application(str, Enum):
    """
    Estimated application.

    Values:
    - FERMI_HUBBARD
    - RSA
    """

    FERMI_HUBBARD = "fermi_hubbard"
    RSA = "rsa"


class Objective(str, Enum):
    """
    RSA optimiser objective.

    Values:
    - MIN_QUBITS: fewest physical qubits with expected runtime under a cap
    - MIN_RUNTIME: shortest expected runtime with physical qubits under a cap
    """

    MIN_QUBITS = "min-qubits"
    MIN_RUNTIME = "min-runtime"


class RhoStrategy(str, Enum):
    """
    Parallelisation factor search.

    Values:
    - GEOMETRIC: geometric grid refined near the best grid point
    - FULL: every rho in 1..|P|
    """

    GEOMETRIC = "geometric"
    FULL = "full"


# ---------------------------------------------------
# Fermi-Hubbard
# ---------------------------------------------------
ENERGY_PER_SITE = {4: 1.02, 8: 0.74}
RELATIVE_ERROR = 0.005


class FHParams(BaseModel):
    """Plaquette-Trotterised Fermi-Hubbard instance on an L x L lattice."""

    model_config = ConfigDict(frozen=True)

    L: int = Field(16, description="Even lattice side")
    u: int = Field(4, description="Coupling strength (4 or 8)")
    W: float | None = Field(None, description="Trotter error bound")
    x: float | None = Field(None, description="Error budget split; optimised when unset")
    t_override: float | None = Field(None, description="Logical cycle count used verbatim")

    @property
    def E0(self) -> float:
        return ENERGY_PER_SITE[self.u]

    @property
    def epsilon(self) -> float:
        """Allowed error, 0.5% of the total lattice energy."""
        return RELATIVE_ERROR * self.E0 * self.L**2

    @property
    def logical_qubits(self) -> int:
        return 2 * self.L**2 + 2

    @property
    def rotations_per_step(self) -> int:
        return 4 * self.L**2

    @property
    def t_gates_per_step(self) -> int:
        return 12 * self.L**2


# ---------------------------------------------------
# RSA
# ---------------------------------------------------
def default_m(n_bits: int, s: int) -> int:
    """Input register size ceil(n/2) + ceil(n/(2s))."""
    return -(-n_bits // 2) + -(-n_bits // (2 * s))


def bit_length(m: int) -> int:
    """len(m) = floor(log2 m) + 1."""
    return m.bit_length()


class RSAParams(BaseModel):
    """One point of the parallelised factoring algorithm's parameter space."""

    model_config = ConfigDict(frozen=True)

    n_bits: int = Field(2048, ge=2, description="RSA modulus size in bits")
    s: int = Field(..., description="Ekera-Hastad parameter")
    f: int = Field(..., description="Accumulator truncation")
    ell: int = Field(..., description="Residue prime bit length")
    w1: int = Field(..., ge=1, description="Loop 1 window size (k/2)")
    w3: int = Field(..., description="Loop 3 window size")
    w4: int = Field(..., description="Loop 4 window size")
    rho: int = Field(1, ge=1, description="Parallelisation factor")
    m: int | None = Field(None, ge=1, description="Input register size; default from n and s")

    @property
    def input_size(self) -> int:
        return self.m if self.m is not None else default_m(self.n_bits, self.s)

    @property
    def len_m(self) -> int:
        return bit_length(self.input_size)

    @property
    def windows(self) -> int:
        """ceil(m / w1): loop 1 windows, also the registers one input register serves."""
        return -(-self.input_size // self.w1)

    @property
    def prime_count(self) -> int:
        """|P| = ceil(n m / (ell w1))."""
        return -(-(self.n_bits * self.input_size) // (self.ell * self.w1))

    @property
    def log_rho(self) -> int:
        """ceil(log2 rho)."""
        return (self.rho - 1).bit_length()

    def key(self) -> tuple[int, ...]:
        return (self.s, self.f, self.ell, self.w3, self.w4, self.rho)


def prime_count_estimate(ell: int) -> float:
    """Number of ell-bit primes, 2^(ell-1) / (ell ln 2)."""
    return 2 ** (ell - 1) / (ell * math.log(2))


# ---------------------------------------------------
# Results
# ---------------------------------------------------
class ResourceEstimate(BaseModel):
    """Logical and physical cost of one application instance."""

    application: Application
    regime: Regime
    d: int = Field(..., description="Code distance")
    d_t: int = Field(..., description="Code cycles per logical cycle")
    t_c: float = Field(..., description="Code cycle time in seconds")
    feasible: bool = True
    reason: str | None = None

    logical_qubits: int = Field(..., description="N")
    logical_cycles: float = Field(..., description="Cycles including magic-state rejection")
    logical_cycles_ideal: float | None = Field(None, description="Cycles with perfect engines")
    t_count: float = Field(..., description="T count per shot")
    physical_qubits: int
    shot_runtime: float = Field(..., description="Seconds per shot")
    expected_shots: float | None = None
    total_runtime: float | None = Field(None, description="Expected seconds for all shots")
    shot_success: float = Field(..., description="Probability a shot has no logical error")
    p_L: float = Field(..., description="Logical error rate per logical qubit and cycle")
    spacetime: float = Field(..., description="N times logical cycles")
    failure_budget: float = Field(..., description="spacetime times p_L")

    physical_qubits_human: str = ""
    total_runtime_human: str = ""
    params: dict[str, Any] = Field(default_factory=dict)


class SubroutineRead(BaseModel):
    """One row of the per-prime subroutine accounting."""

    name: str
    size: float
    instances: float
    t_count: int
    logical_cycles: int


class SubroutineReport(BaseModel):
    rows: list[SubroutineRead]
    tau1: int = Field(..., description="T count per prime")
    Sigma: int = Field(..., description="Logical cycles per outer-loop iteration")
    upsilon: int = Field(..., description="Logical cycles of the loop 1 uncompute")


class SpacetimeRow(BaseModel):
    """Parallelised cost against the unparallelised (rho = 1) register."""

    rho: int
    logical_qubits: int
    logical_cycles: float = Field(..., description="Cycles with perfect engines")
    spacetime: float
    naive_qubits: int = Field(..., description="rho full copies of the rho = 1 register")
    baseline_spacetime: float = Field(..., description="Spacetime at rho = 1")
    saving: float = Field(..., description="baseline_spacetime / spacetime")


class OptimizationResult(BaseModel):
    objective: Objective
    regime: Regime
    t_c: float
    cap: float | None
    feasible: bool
    reason: str | None = None
    params: RSAParams | None = None
    estimate: ResourceEstimate | None = None
    evaluated: int = Field(0, description="Parameter points evaluated")


class HeatmapCell(BaseModel):
    t_c: float
    qubit_cap: int
    feasible: bool
    total_runtime: float | None = None
    total_runtime_human: str = "-"
    physical_qubits: int | None = None
    rho: int | None = None


class ResultsTableRow(BaseModel):
    t_c: float
    p: float
    runtime_cap: float
    feasible: bool
    physical_qubits: int | None = None
    physical_qubits_human: str = "-"
    total_runtime: float | None = None
    total_runtime_human: str = "-"


# ---------------------------------------------------
# Requests
# ---------------------------------------------------
class FHRequest(BaseModel):
    L: int = Field(16, description="Even lattice side")
    regime: Regime = Regime.P_1E3
    t_c: float = Field(1e-6, gt=0, description="Code cycle time in seconds")
    u: int = Field(4, description="Coupling strength (4 or 8)")
    W: float | None = Field(None, description="Trotter error bound")
    x: float | None = Field(None, description="Error budget split")
    t_override: float | None = Field(8.0e6, description="Logical cycle count override")


class RSARequest(BaseModel):
    regime: Regime = Regime.P_1E3
    t_c: float = Field(1e-6, gt=0, description="Code cycle time in seconds")
    n_bits: int = 2048
    s: int
    f: int
    ell: int
    w3: int
    w4: int
    rho: int = 1
    m: int | None = None


class OptimizeRequest(BaseModel):
    p: float = Field(1e-3, gt=0, lt=1, description="Physical error rate")
    t_c: float = Field(1e-6, gt=0, description="Code cycle time in seconds")
    objective: Objective = Objective.MIN_QUBITS
    cap: float | None = Field(
        None, gt=0, description="Runtime cap in seconds, or qubit cap for min-runtime"
    )
    n_bits: int = 2048
    m: int | None = None
    strategy: RhoStrategy = RhoStrategy.GEOMETRIC

"""
backend/app/pbc/schemas.py

Pauli-Based Computation Schemas
Circuit IR, measurement schedule and I/O models for the PBC compiler:
- Gate types (Clifford, T, Pauli measurement, unit join/separate)
- CircuitIR with derived counts (tau, o)
- MeasurementSchedule with per-unit cycle counts
- Request/response models for the compile endpoint
"""

from dataclasses import dataclass, field
from enum import Enum

from pydantic import BaseModel, Field

from app.gf2.symplectic import PauliVec


# ---------------------------------------------------
# Gate Types
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class CliffordGate:
    name: str
    qubits: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class TGate:
    qubit: int
    dagger: bool = False


@dataclass(frozen=True, slots=True)
class PauliMeasure:
    """Intermediate Pauli product measurement; `adaptive` marks outcomes later steps wait on."""

    axis: PauliVec
    adaptive: bool = False


@dataclass(frozen=True, slots=True)
class JoinUnits:
    unit_a: int
    unit_b: int


@dataclass(frozen=True, slots=True)
class SeparateUnit:
    unit: int
    port: bool = False


Gate = CliffordGate | TGate | PauliMeasure | JoinUnits | SeparateUnit


# ---------------------------------------------------
# Circuit IR
# ---------------------------------------------------
@dataclass(frozen=True)
class CircuitIR:
    """
    kappa logical qubits, gates in program order, qubit -> unit assignment and
    an optional adjacency layout (None places no restriction on joins).
    """

    kappa: int
    gates: tuple[Gate, ...]
    unit_assignment: dict[int, int] = field(default_factory=dict)
    adjacency: frozenset[frozenset[int]] | None = None

    @property
    def t_count(self) -> int:
        return sum(1 for gate in self.gates if isinstance(gate, TGate))

    @property
    def measurement_count(self) -> int:
        """Intermediate Pauli measurements, adaptive or not; each becomes one step."""
        return sum(1 for gate in self.gates if isinstance(gate, PauliMeasure))

    @property
    def adaptive_count(self) -> int:
        """o: measurements whose outcomes later steps depend on."""
        return sum(1 for gate in self.gates if isinstance(gate, PauliMeasure) and gate.adaptive)

    @property
    def units(self) -> dict[int, list[int]]:
        grouped: dict[int, list[int]] = {}
        for qubit, unit in sorted(self.unit_assignment.items()):
            grouped.setdefault(unit, []).append(qubit)
        return grouped


# ---------------------------------------------------
# Schedule
# ---------------------------------------------------
class StepKind(str, Enum):
    """
    Kind of a scheduled measurement step.

    Values:
    - T_INJECTION
    - ALGORITHMIC
    - CLEANING
    - FINAL
    """

    T_INJECTION = "t-injection"
    ALGORITHMIC = "algorithmic"
    CLEANING = "cleaning"
    FINAL = "final"


@dataclass(frozen=True, slots=True)
class ScheduleStep:
    axis: PauliVec
    units: frozenset[int]
    kind: StepKind
    cycle: int
    wait: int = 0
    adaptive: bool = False
    gate_index: int | None = None


@dataclass
class MeasurementSchedule:
    kappa: int
    steps: list[ScheduleStep]
    per_unit_cycles: dict[int, int]
    warnings: list[str] = field(default_factory=list)

    @property
    def total_cycles(self) -> int:
        return max(self.per_unit_cycles.values(), default=0)

    def count(self, kind: StepKind) -> int:
        return sum(1 for step in self.steps if step.kind is kind)


# ---------------------------------------------------
# I/O Models
# ---------------------------------------------------
class CompileRequest(BaseModel):
    """Circuit text plus optional timing inputs."""

    circuit: str = Field(..., description="Circuit in the line-oriented text format")
    d_t: int | None = Field(None, ge=1, description="Code cycles per logical cycle (reaction wait)")
    p_r: float = Field(0.0, ge=0, lt=1, description="Magic engine rejection probability")


class ScheduleStepRead(BaseModel):
    index: int
    cycle: int
    kind: StepKind
    axis: str = Field(..., description="Pauli string over all qubits")
    units: list[int]
    wait: int = Field(0, description="Idle cycles inserted for the reaction time")


class CompileResponse(BaseModel):
    kappa: int
    t_count: int
    measurement_count: int = Field(..., description="Intermediate measurements, one step each")
    adaptive_count: int = Field(..., description="o: adaptive measurements")
    step_count: int
    cleaning_steps: int
    total_cycles: int
    expected_cycles: float
    per_unit_cycles: dict[int, int]
    steps: list[ScheduleStepRead]
    warnings: list[str] = Field(default_factory=list)

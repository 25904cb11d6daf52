"""
backend/app/pbc/services.py

Pauli-Based Computation Compiler

Commutes every Clifford gate to the end of the circuit, leaving one Pauli
product measurement per T gate, per intermediate measurement and per final
qubit readout:
- Clifford frame per connected group of processing units
- Unit joins (explicit or triggered by cross-group gates) and separations
  with frame cleaning
- Greedy cycle scheduler with optional reaction-time waits
- Expected cycle counts under magic-state rejection
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from app.arch.services import alpha
from app.cleaning.services import clean_general, clean_port
from app.core.exceptions import CircuitError, ParameterError
from app.gf2.symplectic import (
    PauliVec,
    SymplecticMat,
    apply_clifford,
    compose,
    embed_block_diagonal,
    gate_matrix,
    identity,
    inverse,
    pauli_to_string,
    permute_qubits,
    restrict,
    standard_basis,
)
from app.pbc.parser import parse_circuit
from app.pbc.schemas import (
    CircuitIR,
    CliffordGate,
    CompileRequest,
    CompileResponse,
    JoinUnits,
    MeasurementSchedule,
    PauliMeasure,
    ScheduleStep,
    ScheduleStepRead,
    SeparateUnit,
    StepKind,
    TGate,
)

logger = logging.getLogger(__name__)

REACTION_CODE_CYCLES = 10


# ---------------------------------------------------
# Coordinate Helpers
# ---------------------------------------------------
def _to_local(v: PauliVec, qubits: Sequence[int]) -> PauliVec:
    """Global Pauli over kappa qubits -> group-local Pauli (local j is qubits[j])."""
    n, k = v.n, len(qubits)
    bits = 0
    for j, q in enumerate(qubits):
        if (v.bits >> q) & 1:
            bits |= 1 << j
        if (v.bits >> (n + q)) & 1:
            bits |= 1 << (k + j)
    return PauliVec(k, bits)


def _to_global(v: PauliVec, qubits: Sequence[int], kappa: int) -> PauliVec:
    bits = 0
    for j, q in enumerate(qubits):
        if (v.bits >> j) & 1:
            bits |= 1 << q
        if (v.bits >> (v.n + j)) & 1:
            bits |= 1 << (kappa + q)
    return PauliVec(kappa, bits)


# ---------------------------------------------------
# Compiler State
# ---------------------------------------------------
@dataclass
class UnitGroup:
    """Joined processing units sharing one Clifford frame over `qubits` (local order)."""

    units: frozenset[int]
    qubits: list[int]
    frame: SymplecticMat


class CompilerState:
    """Groups, frames and the per-unit cycle counters of one compilation."""

    def __init__(self, circuit: CircuitIR, d_t: int | None = None) -> None:
        self.circuit = circuit
        self.kappa = circuit.kappa
        self._validate_assignment()
        self.unit_of = dict(circuit.unit_assignment)
        self.groups: dict[int, UnitGroup] = {}
        for unit, qubits in circuit.units.items():
            group = UnitGroup(frozenset({unit}), list(qubits), identity(len(qubits)))
            self.groups[unit] = group
        self.next_free = {unit: 0 for unit in circuit.units}
        self.pending_wait = {unit: 0 for unit in circuit.units}
        self.adaptive_wait = (
            max(0, math.ceil(REACTION_CODE_CYCLES / d_t) - 1) if d_t is not None else 0
        )
        self.steps: list[ScheduleStep] = []
        self.warnings: list[str] = []

    def _validate_assignment(self) -> None:
        assignment = self.circuit.unit_assignment
        bad = [q for q in assignment if not 0 <= q < self.kappa]
        if bad:
            raise CircuitError(f"Unit assignment names qubits outside [0, {self.kappa}): {bad}")
        missing = [q for q in range(self.kappa) if q not in assignment]
        if missing:
            raise CircuitError(f"Qubits {missing} are not assigned to any unit", qubits=missing)

    # ---------------------------------------------------
    # Lookup
    # ---------------------------------------------------
    def group_of_qubit(self, qubit: int) -> UnitGroup:
        if not 0 <= qubit < self.kappa:
            raise CircuitError(f"Qubit {qubit} out of range for {self.kappa} qubits", qubit=qubit)
        return self.groups[self.unit_of[qubit]]

    def group_of_unit(self, unit: int) -> UnitGroup:
        if unit not in self.groups:
            raise CircuitError(f"Unknown unit {unit}", unit=unit)
        return self.groups[unit]

    def _adjacent(self, a: UnitGroup, b: UnitGroup) -> bool:
        layout = self.circuit.adjacency
        if layout is None:
            return True
        return any(frozenset((u, v)) in layout for u in a.units for v in b.units)

    # ---------------------------------------------------
    # Join / Separate
    # ---------------------------------------------------
    def merge(self, a: UnitGroup, b: UnitGroup) -> UnitGroup:
        if a is b:
            return a
        if not self._adjacent(a, b):
            raise CircuitError(
                f"Units {sorted(a.units)} and {sorted(b.units)} are not adjacent in the layout"
            )
        frame = embed_block_diagonal(a.frame, b.frame)
        merged = UnitGroup(a.units | b.units, a.qubits + b.qubits, frame)
        for unit in merged.units:
            self.groups[unit] = merged
        logger.debug(f"[PBC] joined units {sorted(merged.units)}")
        return merged

    def group_for_qubits(self, qubits: Iterable[int]) -> UnitGroup:
        """The group holding all `qubits`, joining groups as needed."""
        group: UnitGroup | None = None
        for qubit in qubits:
            other = self.group_of_qubit(qubit)
            group = other if group is None else self.merge(group, other)
        if group is None:
            raise CircuitError("Operation touches no qubits")
        return group

    def join(self, unit_a: int, unit_b: int) -> UnitGroup:
        a, b = self.group_of_unit(unit_a), self.group_of_unit(unit_b)
        layout = self.circuit.adjacency
        if layout is not None and a is not b and frozenset((unit_a, unit_b)) not in layout:
            raise CircuitError(
                f"Units {unit_a} and {unit_b} are not adjacent", units=[unit_a, unit_b]
            )
        return self.merge(a, b)

    def separate(self, unit: int, port: bool = False, gate_index: int | None = None) -> int:
        """
        Cleans the group frame on `unit`'s qubits and splits the unit off.
        Returns the number of cleaning steps emitted.
        """
        group = self.group_of_unit(unit)
        if len(group.units) == 1:
            message = f"SEPARATE {unit}: unit is not joined, nothing to do"
            logger.warning(f"[PBC] {message}")
            self.warnings.append(message)
            return 0

        own = [i for i, q in enumerate(group.qubits) if self.unit_of[q] == unit]
        rest = [i for i, q in enumerate(group.qubits) if self.unit_of[q] != unit]
        order = own + rest
        qubits = [group.qubits[i] for i in order]
        w = len(own)

        frame = permute_qubits(group.frame, order)
        result = clean_port(frame, w) if port else clean_general(frame, w)
        for axis in result.rotations:
            physical = _to_global(axis, qubits, self.kappa)
            self.schedule_step(physical, group, StepKind.CLEANING, gate_index)

        split = UnitGroup(frozenset({unit}), qubits[:w], identity(w))
        remainder = UnitGroup(
            group.units - {unit},
            qubits[w:],
            restrict(result.residual, list(range(w, len(qubits)))),
        )
        self.groups[unit] = split
        for other in remainder.units:
            self.groups[other] = remainder
        logger.debug(
            f"[PBC] separated unit {unit} (w={w}, {'port' if port else 'general'}) "
            f"with {result.emitted_count} cleaning steps"
        )
        return result.emitted_count

    # ---------------------------------------------------
    # Frame Updates
    # ---------------------------------------------------
    def apply_clifford_gate(self, gate: CliffordGate) -> None:
        group = self.group_for_qubits(gate.qubits)
        local = [group.qubits.index(q) for q in gate.qubits]
        matrix = gate_matrix(gate.name, local, len(group.qubits))
        group.frame = compose(inverse(matrix), group.frame)

    def frame_axis(self, axis: PauliVec, group: UnitGroup) -> PauliVec:
        local = apply_clifford(group.frame, _to_local(axis, group.qubits))
        return _to_global(local, group.qubits, self.kappa)

    # ---------------------------------------------------
    # Scheduling
    # ---------------------------------------------------
    def schedule_step(
        self,
        axis: PauliVec,
        group: UnitGroup,
        kind: StepKind,
        gate_index: int | None,
        adaptive: bool = False,
    ) -> ScheduleStep:
        wait = max(self.pending_wait[u] for u in group.units)
        cycle = max(self.next_free[u] for u in group.units) + wait
        for u in group.units:
            self.next_free[u] = cycle + 1
            self.pending_wait[u] = self.adaptive_wait if adaptive else 0
        step = ScheduleStep(
            axis=axis,
            units=group.units,
            kind=kind,
            cycle=cycle,
            wait=wait,
            adaptive=adaptive,
            gate_index=gate_index,
        )
        self.steps.append(step)
        return step

    def build_schedule(self) -> MeasurementSchedule:
        return MeasurementSchedule(
            kappa=self.kappa,
            steps=list(self.steps),
            per_unit_cycles=dict(sorted(self.next_free.items())),
            warnings=list(self.warnings),
        )


# ---------------------------------------------------
# Public Operations
# ---------------------------------------------------
def join_units(state: CompilerState, unit_a: int, unit_b: int) -> CompilerState:
    state.join(unit_a, unit_b)
    return state


def separate_unit(state: CompilerState, unit: int, port: bool = False) -> CompilerState:
    state.separate(unit, port)
    return state


def compile_circuit(circuit: CircuitIR, d_t: int | None = None) -> MeasurementSchedule:
    """
    Compiles a circuit into a measurement schedule.

    T gates become injection steps along z_q conjugated by the frame, Pauli
    measurements are conjugated the same way, and kappa final Z readouts are
    appended.

    Raises:
        CircuitError: unassigned or out-of-range qubit, unknown unit or a
            join across non-adjacent units.
        PortFormError: SEPARATE ... port on a frame not in port form.
    """
    if d_t is not None and d_t < 1:
        raise ParameterError(f"d_t must be positive, got {d_t}")
    state = CompilerState(circuit, d_t)
    kappa = circuit.kappa

    for index, gate in enumerate(circuit.gates):
        if isinstance(gate, CliffordGate):
            state.apply_clifford_gate(gate)
        elif isinstance(gate, TGate):
            group = state.group_of_qubit(gate.qubit)
            axis = state.frame_axis(standard_basis(kappa, kappa + gate.qubit), group)
            state.schedule_step(axis, group, StepKind.T_INJECTION, index)
        elif isinstance(gate, PauliMeasure):
            if gate.axis.n != kappa:
                raise CircuitError(f"Measurement axis has {gate.axis.n} qubits, expected {kappa}")
            group = state.group_for_qubits(gate.axis.support)
            axis = state.frame_axis(gate.axis, group)
            state.schedule_step(axis, group, StepKind.ALGORITHMIC, index, adaptive=gate.adaptive)
        elif isinstance(gate, JoinUnits):
            state.join(gate.unit_a, gate.unit_b)
        elif isinstance(gate, SeparateUnit):
            state.separate(gate.unit, gate.port, index)

    for qubit in range(kappa):
        group = state.group_of_qubit(qubit)
        axis = state.frame_axis(standard_basis(kappa, kappa + qubit), group)
        state.schedule_step(axis, group, StepKind.FINAL, None)

    schedule = state.build_schedule()
    logger.info(
        f"[PBC] kappa={kappa} tau={circuit.t_count} o={circuit.adaptive_count} "
        f"measurements={circuit.measurement_count} "
        f"-> {len(schedule.steps)} steps, {schedule.total_cycles} cycles"
    )
    return schedule


# ---------------------------------------------------
# Cycle Counts
# ---------------------------------------------------
def expected_cycles(schedule: MeasurementSchedule, p_r: float) -> float:
    """
    Replays the greedy schedule with T-injection steps lasting 1/(1 - p_r)
    cycles on average; returns the latest finishing unit.
    """
    weight = alpha(p_r)
    finish: dict[int, float] = {unit: 0.0 for unit in schedule.per_unit_cycles}
    for step in schedule.steps:
        start = max(finish.get(u, 0.0) for u in step.units) + step.wait
        end = start + (weight if step.kind is StepKind.T_INJECTION else 1.0)
        for u in step.units:
            finish[u] = end
    return max(finish.values(), default=0.0)


def serial_cycles(tau: int, kappa: int, o: int, p_r: float = 0.0) -> float:
    """tau/(1 - p_r) + kappa + o for a single unit."""
    return tau * alpha(p_r) + kappa + o


def parallel_cycles(units: Sequence[tuple[int, int, int]], p_r: float = 0.0) -> float:
    """max over independent units of tau_i/(1 - p_r) + kappa_i + o_i."""
    if not units:
        raise ParameterError("parallel_cycles needs at least one unit")
    return max(serial_cycles(tau, kappa, o, p_r) for tau, kappa, o in units)


# ---------------------------------------------------
# Response Builder
# ---------------------------------------------------
def build_response(payload: CompileRequest) -> CompileResponse:
    circuit = parse_circuit(payload.circuit)
    schedule = compile_circuit(circuit, payload.d_t)
    return schedule_response(circuit, schedule, payload.p_r)


def schedule_response(
    circuit: CircuitIR, schedule: MeasurementSchedule, p_r: float = 0.0
) -> CompileResponse:
    return CompileResponse(
        kappa=circuit.kappa,
        t_count=circuit.t_count,
        measurement_count=circuit.measurement_count,
        adaptive_count=circuit.adaptive_count,
        step_count=len(schedule.steps),
        cleaning_steps=schedule.count(StepKind.CLEANING),
        total_cycles=schedule.total_cycles,
        expected_cycles=expected_cycles(schedule, p_r),
        per_unit_cycles=schedule.per_unit_cycles,
        steps=[
            ScheduleStepRead(
                index=i,
                cycle=step.cycle,
                kind=step.kind,
                axis=pauli_to_string(step.axis),
                units=sorted(step.units),
                wait=step.wait,
            )
            for i, step in enumerate(schedule.steps)
        ],
        warnings=schedule.warnings,
    )

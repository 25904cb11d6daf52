"""
tests/pbc/test_pbc.py

Test cases for the Pauli-based computation compiler.
Covers the circuit parser, frame tracking, measurement counts, unit
joins and separations, reaction waits, cycle formulas and the compile
endpoint.
"""

from collections import defaultdict
from pathlib import Path

import numpy as np
import pytest
from fastapi import status
from httpx import AsyncClient

from app.core.exceptions import CircuitError, ConfigError, ParameterError
from app.gf2.symplectic import (
    PauliVec,
    SymplecticMat,
    apply_clifford,
    compose,
    gate_matrix,
    identity,
    inverse,
    pauli_to_string,
    random_pauli,
    standard_basis,
)
from app.pbc.parser import parse_circuit, read_circuit
from app.pbc.schemas import (
    CircuitIR,
    CliffordGate,
    Gate,
    PauliMeasure,
    SeparateUnit,
    StepKind,
    TGate,
)
from app.pbc.services import (
    CompilerState,
    compile_circuit,
    expected_cycles,
    join_units,
    parallel_cycles,
    separate_unit,
    serial_cycles,
)

GATES_1Q = ("H", "S", "SDG", "X", "SX")
GATES_2Q = ("CNOT", "CZ", "SWAP")


def random_circuit(
    kappa: int, length: int, seed: int, measure: bool = True, adaptive: bool = True
) -> CircuitIR:
    """Single-unit circuit mixing Cliffords, T gates and Pauli measurements."""
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []
    for _ in range(length):
        roll = int(rng.integers(0, 4 if measure else 3))
        if roll == 0:
            gates.append(TGate(qubit=int(rng.integers(0, kappa))))
        elif roll == 1 or kappa == 1:
            name = GATES_1Q[int(rng.integers(0, len(GATES_1Q)))]
            gates.append(CliffordGate(name=name, qubits=(int(rng.integers(0, kappa)),)))
        elif roll == 2:
            a, b = (int(q) for q in rng.choice(kappa, size=2, replace=False))
            name = GATES_2Q[int(rng.integers(0, len(GATES_2Q)))]
            gates.append(CliffordGate(name=name, qubits=(a, b)))
        else:
            gates.append(PauliMeasure(axis=random_pauli(kappa, rng), adaptive=adaptive))
    return CircuitIR(kappa=kappa, gates=tuple(gates), unit_assignment={q: 0 for q in range(kappa)})


# --- Parser ---


def test_parse_counts(bell_circuit_file: Path) -> None:
    """Test parsing reports kappa, T count and intermediate measurements."""
    circuit = read_circuit(bell_circuit_file)
    assert circuit.kappa == 2
    assert circuit.t_count == 2
    assert circuit.measurement_count == 1
    assert circuit.adaptive_count == 1
    assert circuit.units == {0: [0, 1]}
    assert circuit.adjacency is None


def test_parse_infers_kappa_and_units() -> None:
    """Test kappa comes from the largest qubit index when QUBITS is absent."""
    circuit = parse_circuit("UNIT 0 0\nUNIT 1 1 2\nADJACENT 0 1\nCLIFFORD CZ 0 2\nTDG 1\n")
    assert circuit.kappa == 3
    assert circuit.units == {0: [0], 1: [1, 2]}
    assert circuit.adjacency == frozenset({frozenset({0, 1})})
    assert circuit.gates[-1] == TGate(qubit=1, dagger=True)


def test_parse_skips_comments() -> None:
    """Test comment-only and blank lines are ignored."""
    circuit = parse_circuit("# header\n\nQUBITS 1  # one qubit\nT 0\n")
    assert circuit.kappa == 1
    assert circuit.gates == (TGate(qubit=0),)


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("QUBITS 1\nFOO 0\n", "unknown instruction 'FOO'"),
        ("QUBITS 3\nMEASURE XZ\n", "has length 2, expected 3"),
        ("QUBITS 2\nCLIFFORD CNOT 0\n", "CNOT takes 2 qubit(s), got 1"),
        ("QUBITS 2\nCLIFFORD CNOT 1 1\n", "repeated qubit"),
        ("QUBITS 1\nCLIFFORD FOO 0\n", "unknown Clifford gate"),
        ("QUBITS 1\nMEASURE I\n", "cannot measure the identity"),
        ("QUBITS 1\nMEASURE Q\n", "bad Pauli string"),
        ("QUBITS 1\nT -1\n", "non-negative"),
        ("QUBITS 1\nT 3\n", "out of range"),
        ("UNIT 0 0\nUNIT 1 0\n", "already assigned"),
        ("QUBITS 1\nSEPARATE 0 sideways\n", "SEPARATE <id> [port]"),
    ],
)
def test_parse_errors(text: str, message: str) -> None:
    """Test malformed circuits raise CircuitError naming the problem."""
    with pytest.raises(CircuitError) as exc:
        parse_circuit(text)
    assert message in exc.value.message


def test_parse_error_names_line() -> None:
    """Test the error message names the offending line."""
    with pytest.raises(CircuitError, match="line 3"):
        parse_circuit("QUBITS 1\nT 0\nBOGUS\n")


def test_read_missing_circuit(tmp_path: Path) -> None:
    """Test an unreadable circuit file is a configuration error."""
    with pytest.raises(ConfigError):
        read_circuit(tmp_path / "missing.circ")


# --- Single-unit compilation ---


def test_single_t_gate() -> None:
    """Test one T gate and one readout give tau + kappa steps."""
    schedule = compile_circuit(parse_circuit("QUBITS 1\nT 0\n"))
    assert [step.kind for step in schedule.steps] == [StepKind.T_INJECTION, StepKind.FINAL]
    assert [pauli_to_string(step.axis) for step in schedule.steps] == ["Z", "Z"]
    assert schedule.total_cycles == 2


def test_clifford_only_circuit() -> None:
    """Test a Clifford-only circuit leaves exactly kappa final readouts."""
    schedule = compile_circuit(parse_circuit("QUBITS 3\nCLIFFORD H 0\nCLIFFORD CNOT 0 1\n"))
    assert len(schedule.steps) == 3
    assert all(step.kind is StepKind.FINAL for step in schedule.steps)


def test_t_after_hadamard_is_x_rotation() -> None:
    """Test a T gate behind a Hadamard is injected along X."""
    schedule = compile_circuit(parse_circuit("QUBITS 1\nCLIFFORD H 0\nT 0\n"))
    assert pauli_to_string(schedule.steps[0].axis) == "X"


def test_bell_circuit_axes(bell_circuit_file: Path) -> None:
    """Test T axes behind a Bell preparation carry the entangling frame."""
    schedule = compile_circuit(read_circuit(bell_circuit_file))
    axes = [pauli_to_string(step.axis) for step in schedule.steps]
    kinds = [step.kind for step in schedule.steps]
    assert kinds[:3] == [StepKind.T_INJECTION, StepKind.T_INJECTION, StepKind.ALGORITHMIC]
    assert axes == ["XI", "XZ", "IZ", "XI", "XZ"]


def oracle_axes(circuit: CircuitIR) -> list[PauliVec]:
    """Axes recomputed gate by gate from the inverse of the Clifford prefix."""
    kappa = circuit.kappa
    prefix: SymplecticMat = identity(kappa)
    expected = []
    for gate in circuit.gates:
        frame = inverse(prefix)
        if isinstance(gate, CliffordGate):
            prefix = compose(prefix, gate_matrix(gate.name, list(gate.qubits), kappa))
        elif isinstance(gate, TGate):
            expected.append(apply_clifford(frame, standard_basis(kappa, kappa + gate.qubit)))
        elif isinstance(gate, PauliMeasure):
            expected.append(apply_clifford(frame, gate.axis))
    frame = inverse(prefix)
    expected += [apply_clifford(frame, standard_basis(kappa, kappa + q)) for q in range(kappa)]
    return expected


@pytest.mark.parametrize("seed", range(25))
def test_measurement_count_identity(seed: int) -> None:
    """Test a single-unit circuit compiles to exactly tau + kappa + o steps."""
    rng = np.random.default_rng(seed)
    kappa = int(rng.integers(1, 7))
    circuit = random_circuit(kappa, int(rng.integers(0, 21)), seed)
    schedule = compile_circuit(circuit)
    assert circuit.adaptive_count == circuit.measurement_count
    assert len(schedule.steps) == circuit.t_count + kappa + circuit.adaptive_count
    assert schedule.count(StepKind.CLEANING) == 0
    assert schedule.total_cycles == len(schedule.steps)


def test_plain_measurements_are_steps_but_not_o() -> None:
    """Test a non-adaptive measurement still takes a step without counting toward o."""
    text = "QUBITS 2\nT 0\nMEASURE XZ\nCLIFFORD H 1\nMEASURE ZZ adaptive\nT 1\n"
    circuit = parse_circuit(text)
    schedule = compile_circuit(circuit)
    assert circuit.measurement_count == 2
    assert circuit.adaptive_count == 1
    assert len(schedule.steps) == circuit.t_count + 2 + circuit.measurement_count


@pytest.mark.parametrize("seed", range(25))
def test_frame_oracle(seed: int) -> None:
    """Test every scheduled axis equals the original axis under the recomputed frame."""
    rng = np.random.default_rng(1000 + seed)
    kappa = int(rng.integers(1, 7))
    circuit = random_circuit(kappa, 20, 1000 + seed)
    schedule = compile_circuit(circuit)
    assert [step.axis for step in schedule.steps] == oracle_axes(circuit)


@pytest.mark.slow
def test_step_count_and_frame_oracle_over_random_circuits() -> None:
    """Test the step count identity and the frame oracle on a thousand circuits, kappa 1 to 6."""
    trials = 0
    for trial in range(1000):
        kappa = 1 + trial % 6
        rng = np.random.default_rng(5000 + trial)
        circuit = random_circuit(kappa, int(rng.integers(0, 41)), 5000 + trial)
        schedule = compile_circuit(circuit)
        assert len(schedule.steps) == circuit.t_count + kappa + circuit.adaptive_count
        assert [step.axis for step in schedule.steps] == oracle_axes(circuit)
        trials += 1
    assert trials == 1000


def test_bad_d_t() -> None:
    """Test a non-positive d_t is rejected."""
    with pytest.raises(ParameterError):
        compile_circuit(parse_circuit("QUBITS 1\nT 0\n"), d_t=0)


def test_unassigned_qubit() -> None:
    """Test qubits outside every unit are rejected."""
    circuit = CircuitIR(kappa=2, gates=(), unit_assignment={0: 0})
    with pytest.raises(CircuitError, match="not assigned"):
        compile_circuit(circuit)


# --- Reaction waits ---


@pytest.mark.parametrize(("d_t", "wait", "cycles"), [(12, 0, 3), (10, 0, 3), (6, 1, 4), (2, 4, 7)])
def test_adaptive_wait(d_t: int, wait: int, cycles: int) -> None:
    """Test the step after an adaptive measurement waits ceil(10/d_t) - 1 cycles."""
    schedule = compile_circuit(parse_circuit("QUBITS 1\nMEASURE Z adaptive\nT 0\n"), d_t=d_t)
    assert schedule.steps[1].wait == wait
    assert schedule.steps[1].cycle == 1 + wait
    assert schedule.total_cycles == cycles


def test_non_adaptive_measurement_does_not_wait() -> None:
    """Test plain measurements never delay the next step."""
    schedule = compile_circuit(parse_circuit("QUBITS 1\nMEASURE Z\nT 0\n"), d_t=2)
    assert all(step.wait == 0 for step in schedule.steps)


# --- Joining ---


TWO_UNITS = "QUBITS 2\nUNIT 0 0\nUNIT 1 1\n"


def test_independent_units_run_in_parallel() -> None:
    """Test T gates on separate units share a cycle."""
    schedule = compile_circuit(parse_circuit(TWO_UNITS + "T 0\nT 1\n"))
    t_steps = [step for step in schedule.steps if step.kind is StepKind.T_INJECTION]
    assert [step.cycle for step in t_steps] == [0, 0]
    assert schedule.per_unit_cycles == {0: 2, 1: 2}


def test_cross_unit_gate_serializes() -> None:
    """Test a CNOT across units joins them and serializes later T gates."""
    schedule = compile_circuit(parse_circuit(TWO_UNITS + "CLIFFORD CNOT 0 1\nT 0\nT 1\n"))
    t_steps = [step for step in schedule.steps if step.kind is StepKind.T_INJECTION]
    assert [step.cycle for step in t_steps] == [0, 1]
    assert all(step.units == frozenset({0, 1}) for step in t_steps)
    assert schedule.total_cycles == 4


def test_join_without_cross_gates_matches_serial() -> None:
    """Test an explicit join without cross-unit gates schedules like one unit."""
    joined = compile_circuit(parse_circuit(TWO_UNITS + "JOIN 0 1\nT 0\nT 1\n"))
    serial = compile_circuit(parse_circuit("QUBITS 2\nT 0\nT 1\n"))
    assert [(s.cycle, pauli_to_string(s.axis)) for s in joined.steps] == [
        (s.cycle, pauli_to_string(s.axis)) for s in serial.steps
    ]


def test_three_units_share_counter() -> None:
    """Test pairwise joins leave a single group with one cycle counter."""
    circuit = parse_circuit("QUBITS 3\nUNIT 0 0\nUNIT 1 1\nUNIT 2 2\n")
    state = join_units(join_units(CompilerState(circuit), 0, 1), 1, 2)
    assert state.group_of_unit(0) is state.group_of_unit(2)
    assert state.group_of_unit(1).units == frozenset({0, 1, 2})

    schedule = compile_circuit(
        parse_circuit("QUBITS 3\nUNIT 0 0\nUNIT 1 1\nUNIT 2 2\nJOIN 0 1\nJOIN 1 2\nT 0\nT 2\n")
    )
    assert set(schedule.per_unit_cycles.values()) == {5}


def test_join_requires_adjacency() -> None:
    """Test joins across non-adjacent units are refused."""
    layout = "QUBITS 3\nUNIT 0 0\nUNIT 1 1\nUNIT 2 2\nADJACENT 0 1\nADJACENT 1 2\n"
    with pytest.raises(CircuitError, match="not adjacent"):
        compile_circuit(parse_circuit(layout + "JOIN 0 2\n"))
    with pytest.raises(CircuitError, match="not adjacent"):
        compile_circuit(parse_circuit(layout + "CLIFFORD CNOT 0 2\n"))
    compile_circuit(parse_circuit(layout + "JOIN 0 1\nJOIN 1 2\nCLIFFORD CNOT 0 2\n"))


# --- Separation ---


def test_separate_right_after_join_is_free() -> None:
    """Test separating with an untouched frame emits no cleaning steps."""
    schedule = compile_circuit(parse_circuit(TWO_UNITS + "JOIN 0 1\nSEPARATE 0\n"))
    assert schedule.count(StepKind.CLEANING) == 0
    assert schedule.warnings == []


def test_separate_unjoined_unit_warns() -> None:
    """Test separating a unit that was never joined only records a warning."""
    schedule = compile_circuit(parse_circuit(TWO_UNITS + "SEPARATE 1\n"))
    assert schedule.count(StepKind.CLEANING) == 0
    assert len(schedule.warnings) == 1
    assert "not joined" in schedule.warnings[0]


def test_separate_after_cross_cnot() -> None:
    """Test a two-qubit unit is cleaned within 4w steps and then runs in parallel."""
    circuit = parse_circuit(
        "QUBITS 4\nUNIT 0 0 1\nUNIT 1 2 3\n"
        "CLIFFORD H 1\nCLIFFORD CNOT 1 2\nSEPARATE 0\nT 0\nT 2\n"
    )
    schedule = compile_circuit(circuit)
    cleaning = schedule.count(StepKind.CLEANING)
    assert 0 < cleaning <= 8

    t_steps = [step for step in schedule.steps if step.kind is StepKind.T_INJECTION]
    assert t_steps[0].cycle == t_steps[1].cycle == cleaning
    assert t_steps[0].units == frozenset({0})
    assert t_steps[1].units == frozenset({1})
    assert pauli_to_string(t_steps[0].axis) == "ZIII"


@pytest.mark.parametrize("gate", ["CNOT 0 1", "CZ 0 1", "S 0"])
def test_port_separation_bound(gate: str) -> None:
    """Test a read-only port access is cleaned within 2w steps."""
    schedule = compile_circuit(
        parse_circuit(TWO_UNITS + f"CLIFFORD {gate}\nJOIN 0 1\nSEPARATE 0 port\n")
    )
    assert schedule.count(StepKind.CLEANING) <= 2


def test_separate_unit_operation() -> None:
    """Test the state-level separate splits the group back into units."""
    circuit = parse_circuit(TWO_UNITS + "CLIFFORD CNOT 0 1\n")
    state = CompilerState(circuit)
    gate = circuit.gates[0]
    assert isinstance(gate, CliffordGate)
    state.apply_clifford_gate(gate)
    state = separate_unit(state, 1)
    assert state.group_of_unit(0) is not state.group_of_unit(1)
    assert state.group_of_unit(1).frame == identity(1)


@pytest.mark.parametrize("seed", range(10))
def test_cycles_touch_disjoint_units(seed: int) -> None:
    """Test steps sharing a cycle never share a unit."""
    rng = np.random.default_rng(seed)
    kappa = 4
    gates: list[Gate] = []
    for _ in range(30):
        roll = int(rng.integers(0, 5))
        if roll < 2:
            gates.append(TGate(qubit=int(rng.integers(0, kappa))))
        elif roll == 2:
            a, b = (int(q) for q in rng.choice(kappa, size=2, replace=False))
            gates.append(CliffordGate(name="CNOT", qubits=(a, b)))
        elif roll == 3:
            gates.append(CliffordGate(name="H", qubits=(int(rng.integers(0, kappa)),)))
        else:
            gates.append(SeparateUnit(unit=int(rng.integers(0, 2))))
    circuit = CircuitIR(kappa=kappa, gates=tuple(gates), unit_assignment={0: 0, 1: 0, 2: 1, 3: 1})
    schedule = compile_circuit(circuit)

    by_cycle: dict[int, list[frozenset[int]]] = defaultdict(list)
    for step in schedule.steps:
        by_cycle[step.cycle].append(step.units)
    for groups in by_cycle.values():
        seen: set[int] = set()
        for units in groups:
            assert not seen & units
            seen |= units


# --- Cycle formulas ---


def test_serial_cycles_with_rejection() -> None:
    """Test tau/(1 - p_r) + kappa + o for one unit."""
    assert serial_cycles(100, 10, 0, 0.06) == pytest.approx(116.38, abs=0.01)
    assert serial_cycles(100, 10, 5) == 115


def test_parallel_cycles() -> None:
    """Test independent units finish with the slowest one."""
    assert parallel_cycles([(50, 5, 0), (20, 30, 0)]) == 55
    with pytest.raises(ParameterError):
        parallel_cycles([])


def test_expected_cycles_plain() -> None:
    """Test p_r = 0 reproduces the plain cycle count."""
    schedule = compile_circuit(random_circuit(3, 20, seed=7))
    assert expected_cycles(schedule, 0.0) == schedule.total_cycles


def test_expected_cycles_matches_serial_formula() -> None:
    """Test the replayed schedule agrees with the single-unit formula."""
    circuit = random_circuit(3, 20, seed=11)
    schedule = compile_circuit(circuit)
    expected = serial_cycles(circuit.t_count, 3, circuit.adaptive_count, 0.06)
    assert expected_cycles(schedule, 0.06) == pytest.approx(expected)


# --- Compile endpoint ---


@pytest.mark.asyncio
async def test_compile_route(async_client: AsyncClient, bell_circuit_file: Path) -> None:
    """Test compiling a circuit over HTTP."""
    payload = {"circuit": bell_circuit_file.read_text(), "d_t": 6, "p_r": 0.0}
    response = await async_client.post("/pbc/compile", json=payload)
    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["kappa"] == 2
    assert data["t_count"] == 2
    assert data["step_count"] == 5
    assert data["cleaning_steps"] == 0
    assert data["steps"][0]["kind"] == "t-injection"
    assert data["steps"][3]["wait"] == 1
    assert data["total_cycles"] == 6
    assert data["expected_cycles"] == pytest.approx(6.0)


@pytest.mark.asyncio
async def test_compile_route_bad_circuit(async_client: AsyncClient) -> None:
    """Test a malformed circuit is reported as 422 with the line number."""
    response = await async_client.post("/pbc/compile", json={"circuit": "QUBITS 1\nFOO\n"})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert "line 2" in response.json()["detail"]

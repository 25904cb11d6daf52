"""
backend/app/pbc/parser.py

Circuit Text Format

One instruction per line; `#` starts a comment:

    QUBITS <kappa>
    UNIT <id> <qubit> [<qubit> ...]
    ADJACENT <id> <id>
    CLIFFORD <name> <qubit> [<qubit>]
    T <qubit> | TDG <qubit>
    MEASURE <pauli-string> [adaptive]
    JOIN <id> <id>
    SEPARATE <id> [port]

Without UNIT lines every qubit sits in unit 0; without ADJACENT lines any
units may be joined. Without QUBITS, kappa is inferred from the gates.
"""

from pathlib import Path

from app.core.exceptions import CircuitError, ConfigError
from app.gf2.symplectic import SINGLE_QUBIT_GATES, TWO_QUBIT_GATES, pauli_from_string
from app.pbc.schemas import (
    CircuitIR,
    CliffordGate,
    Gate,
    JoinUnits,
    PauliMeasure,
    SeparateUnit,
    TGate,
)


def _int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise CircuitError(f"line {lineno}: {what} must be an integer, got '{token}'", line=lineno)
    if value < 0:
        raise CircuitError(f"line {lineno}: {what} must be non-negative, got {value}", line=lineno)
    return value


def parse_circuit(text: str) -> CircuitIR:
    """
    Parses the circuit text format into a CircuitIR.

    Raises:
        CircuitError: unknown instruction, wrong arity, bad index or a Pauli
            string whose length differs from kappa; the message names the line.
    """
    declared_kappa: int | None = None
    units: dict[int, int] = {}
    adjacency: set[frozenset[int]] = set()
    pending: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        op = tokens[0].upper()
        args = tokens[1:]
        if op == "QUBITS":
            if len(args) != 1:
                raise CircuitError(f"line {lineno}: QUBITS takes one argument", line=lineno)
            declared_kappa = _int(args[0], lineno, "qubit count")
        elif op == "UNIT":
            if len(args) < 2:
                raise CircuitError(f"line {lineno}: UNIT needs an id and qubits", line=lineno)
            unit = _int(args[0], lineno, "unit id")
            for token in args[1:]:
                qubit = _int(token, lineno, "qubit")
                if qubit in units:
                    raise CircuitError(
                        f"line {lineno}: qubit {qubit} already assigned to unit {units[qubit]}",
                        line=lineno,
                    )
                units[qubit] = unit
        elif op == "ADJACENT":
            if len(args) != 2:
                raise CircuitError(f"line {lineno}: ADJACENT takes two unit ids", line=lineno)
            a, b = (_int(token, lineno, "unit id") for token in args)
            adjacency.add(frozenset((a, b)))
        else:
            pending.append((lineno, [op, *args]))

    gates: list[Gate] = []
    max_qubit = max(units, default=-1)
    for lineno, (op, *args) in pending:
        if op == "CLIFFORD":
            if not args:
                raise CircuitError(f"line {lineno}: CLIFFORD needs a gate name", line=lineno)
            name = args[0].upper()
            arity = 1 if name in SINGLE_QUBIT_GATES else 2 if name in TWO_QUBIT_GATES else 0
            if arity == 0:
                raise CircuitError(f"line {lineno}: unknown Clifford gate '{args[0]}'", line=lineno)
            if len(args) - 1 != arity:
                raise CircuitError(
                    f"line {lineno}: {name} takes {arity} qubit(s), got {len(args) - 1}",
                    line=lineno,
                )
            qubits = tuple(_int(token, lineno, "qubit") for token in args[1:])
            if len(set(qubits)) != len(qubits):
                raise CircuitError(f"line {lineno}: repeated qubit in {name}", line=lineno)
            max_qubit = max(max_qubit, *qubits)
            gates.append(CliffordGate(name=name, qubits=qubits))
        elif op in ("T", "TDG"):
            if len(args) != 1:
                raise CircuitError(f"line {lineno}: {op} takes one qubit", line=lineno)
            qubit = _int(args[0], lineno, "qubit")
            max_qubit = max(max_qubit, qubit)
            gates.append(TGate(qubit=qubit, dagger=op == "TDG"))
        elif op == "MEASURE":
            if not 1 <= len(args) <= 2 or (len(args) == 2 and args[1].lower() != "adaptive"):
                raise CircuitError(
                    f"line {lineno}: expected MEASURE <pauli-string> [adaptive]", line=lineno
                )
            try:
                axis = pauli_from_string(args[0])
            except Exception:
                raise CircuitError(f"line {lineno}: bad Pauli string '{args[0]}'", line=lineno)
            if axis.is_identity():
                raise CircuitError(f"line {lineno}: cannot measure the identity", line=lineno)
            max_qubit = max(max_qubit, axis.n - 1)
            gates.append(PauliMeasure(axis=axis, adaptive=len(args) == 2))
        elif op == "JOIN":
            if len(args) != 2:
                raise CircuitError(f"line {lineno}: JOIN takes two unit ids", line=lineno)
            a, b = (_int(token, lineno, "unit id") for token in args)
            gates.append(JoinUnits(unit_a=a, unit_b=b))
        elif op == "SEPARATE":
            if not 1 <= len(args) <= 2 or (len(args) == 2 and args[1].lower() != "port"):
                raise CircuitError(f"line {lineno}: expected SEPARATE <id> [port]", line=lineno)
            gates.append(SeparateUnit(unit=_int(args[0], lineno, "unit id"), port=len(args) == 2))
        else:
            raise CircuitError(f"line {lineno}: unknown instruction '{op}'", line=lineno)

    kappa = declared_kappa if declared_kappa is not None else max_qubit + 1
    if kappa < 1:
        raise CircuitError("Circuit has no qubits")
    if max_qubit >= kappa:
        raise CircuitError(f"Qubit index {max_qubit} out of range for {kappa} qubits")
    for lineno, (op, *args) in pending:
        if op == "MEASURE" and len(args[0]) != kappa:
            raise CircuitError(
                f"line {lineno}: Pauli string '{args[0]}' has length {len(args[0])}, "
                f"expected {kappa}",
                line=lineno,
            )

    assignment = units if units else {q: 0 for q in range(kappa)}
    return CircuitIR(
        kappa=kappa,
        gates=tuple(gates),
        unit_assignment=assignment,
        adjacency=frozenset(adjacency) if adjacency else None,
    )


def read_circuit(path: str | Path) -> CircuitIR:
    """Reads and parses a circuit file."""
    circuit_path = Path(path)
    try:
        text = circuit_path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read circuit file {circuit_path}: {e}", path=str(circuit_path))
    return parse_circuit(text)

"""
tests/cleaning/test_cleaning.py

Test cases for Clifford frame cleaning.
Covers the general and port procedures, their rotation bounds, replay
verification, error paths and the cleaning endpoint.
"""

import numpy as np
import pytest
from fastapi import status
from httpx import AsyncClient

from app.cleaning.schemas import CleaningMode
from app.cleaning.services import (
    build_response,
    clean_general,
    clean_port,
    is_port_form,
    is_trivial_on_prefix,
    port_form_violation,
    verify_cleaning,
)
from app.core.exceptions import DimensionMismatchError, NotSymplecticError, PortFormError
from app.gf2.symplectic import (
    SymplecticMat,
    compose,
    embed_block_diagonal,
    gate_matrix,
    identity,
    pauli_to_string,
    random_symplectic,
)


def port_frame(n: int, w: int, seed: int) -> SymplecticMat:
    """Random frame controlled only by the first w qubits."""
    rng = np.random.default_rng(seed)
    frame = embed_block_diagonal(identity(w), random_symplectic(n - w, seed))
    for _ in range(3 * n):
        control = int(rng.integers(0, w))
        target = int(rng.integers(w, n))
        gate = ("CNOT", "CZ", "S")[int(rng.integers(0, 3))]
        qubits = [control] if gate == "S" else [control, target]
        frame = compose(frame, gate_matrix(gate, qubits, n))
    return frame


# --- General procedure ---


def test_hadamard_is_cleaned_by_one_y_rotation(hadamard: SymplecticMat) -> None:
    """Test the Hadamard frame needs a single pi/4 rotation about Y."""
    result = clean_general(hadamard, 1)
    assert [pauli_to_string(axis) for axis in result.rotations] == ["Y"]
    assert result.residual == identity(1)
    assert verify_cleaning(hadamard, result, 1)


def test_identity_needs_no_rotations() -> None:
    result = clean_general(identity(3), 3)
    assert result.emitted_count == 0
    assert result.residual == identity(3)


@pytest.mark.slow
def test_general_cleaning_bound_over_random_frames() -> None:
    """Test residual triviality and the 4w bound over a thousand random frames."""
    trials = 0
    for n in range(1, 9):
        for seed in range(125):
            m = random_symplectic(n, 1000 * n + seed)
            w = 1 + seed % n
            result = clean_general(m, w)
            assert result.emitted_count <= 4 * w
            assert is_trivial_on_prefix(result.residual, w)
            assert verify_cleaning(m, result, w)
            trials += 1
    assert trials == 1000


@pytest.mark.parametrize("seed", range(20))
def test_general_cleaning_with_step_checks(seed: int) -> None:
    m = random_symplectic(5, seed)
    result = clean_general(m, 5, check_each_step=True)
    assert result.residual == identity(5)


def test_general_cleaning_rejects_bad_width(hadamard: SymplecticMat) -> None:
    with pytest.raises(DimensionMismatchError):
        clean_general(hadamard, 2)


def test_general_cleaning_rejects_non_symplectic() -> None:
    with pytest.raises(NotSymplecticError):
        clean_general(SymplecticMat.from_lists([[1, 1], [1, 1]]), 1)


# --- Port procedure ---


@pytest.mark.slow
@pytest.mark.parametrize("n", range(2, 9))
def test_port_cleaning_bound(n: int) -> None:
    """Test port-form frames are cleaned with at most two rotations per qubit."""
    for seed in range(40):
        w = 1 + seed % (n - 1)
        m = port_frame(n, w, seed)
        assert is_port_form(m, w)
        result = clean_port(m, w, check_each_step=True)
        assert result.emitted_count <= 2 * w
        assert is_trivial_on_prefix(result.residual, w)
        assert verify_cleaning(m, result, w)


def test_port_cleaning_names_the_violated_row(hadamard: SymplecticMat) -> None:
    assert port_form_violation(hadamard, 1) == 0
    with pytest.raises(PortFormError) as exc:
        clean_port(hadamard, 1)
    assert exc.value.context["row"] == 0
    assert "row 0" in str(exc.value)


def test_port_form_of_identity() -> None:
    assert is_port_form(identity(3), 2)
    assert clean_port(identity(3), 2).emitted_count == 0


# --- Response builder and route ---


def test_build_response_reports_bound(hadamard: SymplecticMat) -> None:
    response = build_response(hadamard, 1, CleaningMode.GENERAL, verify=True)
    assert response.bound == 4
    assert response.emitted_count == 1
    assert response.rotations == ["Y"]
    assert response.residual == [[1, 0], [0, 1]]
    assert response.verified is True


@pytest.mark.asyncio
async def test_clean_route(async_client: AsyncClient) -> None:
    """Test cleaning the Hadamard frame over HTTP."""
    payload = {"rows": [[0, 1], [1, 0]], "w": 1, "mode": "general", "verify": True}
    response = await async_client.post("/cleaning/clean", json=payload)
    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["rotations"] == ["Y"]
    assert data["verified"] is True


@pytest.mark.asyncio
async def test_clean_route_port_form_error(async_client: AsyncClient) -> None:
    """Test a non-port frame in port mode maps to 422 naming the row."""
    payload = {"rows": [[0, 1], [1, 0]], "w": 1, "mode": "port"}
    response = await async_client.post("/cleaning/clean", json=payload)
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert "row 0" in response.json()["detail"]

"""
tests/estimators/test_fermi_hubbard.py

Test cases for the Fermi-Hubbard resource estimate.
Covers the published qubit counts and runtimes, the cycle and T count
model, parameter validation and the estimate endpoint.
"""

import pytest
from fastapi import status
from httpx import AsyncClient

from app.arch.schemas import Regime
from app.core.exceptions import ParameterError
from app.core.formatting import SECONDS_PER_DAY, SECONDS_PER_MINUTE
from app.data.loader import ComponentTable
from app.estimators.fermi_hubbard import (
    fh_cycles,
    fh_estimate,
    fh_t_count,
    fh_table,
    optimal_x,
)
from app.estimators.schemas import Application, FHParams
from app.estimators.services import application_hardware, shot_success

OVERRIDE = 8.0e6


# --- Published table ---


@pytest.mark.parametrize(
    ("regime", "qubits", "human"),
    [(Regime.P_1E3, 62154, "62 kq"), (Regime.P_1E4, 21564, "22 kq")],
)
def test_physical_qubits(regime: Regime, qubits: int, human: str, table: ComponentTable) -> None:
    """Test L=16 needs n_pb ceil(N/k) + n_me physical qubits."""
    estimate = fh_estimate(FHParams(L=16, t_override=OVERRIDE), regime, 1e-6, table)
    assert estimate.physical_qubits == qubits
    assert estimate.physical_qubits_human == human
    assert estimate.logical_qubits == 2 * 16**2 + 2


@pytest.mark.parametrize(
    ("regime", "t_c", "runtime"),
    [
        (Regime.P_1E3, 1e-6, 3.6 * SECONDS_PER_MINUTE),
        (Regime.P_1E4, 1e-6, 1.6 * SECONDS_PER_MINUTE),
        (Regime.P_1E3, 1e-3, 2.5 * SECONDS_PER_DAY),
        (Regime.P_1E4, 1e-3, 1.1 * SECONDS_PER_DAY),
    ],
)
def test_runtime(regime: Regime, t_c: float, runtime: float, table: ComponentTable) -> None:
    """Test per-shot runtimes with the cycle override are within 10% of the table."""
    estimate = fh_estimate(FHParams(L=16, t_override=OVERRIDE), regime, t_c, table)
    assert estimate.total_runtime == pytest.approx(runtime, rel=0.1)
    assert estimate.expected_shots == 1.0


def test_runtime_uses_availability(table: ComponentTable) -> None:
    """Test rejected T states stretch the override by (2/3) alpha + 1/3."""
    estimate = fh_estimate(FHParams(L=16, t_override=OVERRIDE), Regime.P_1E4, 1e-6, table)
    assert estimate.logical_cycles_ideal == OVERRIDE
    assert estimate.logical_cycles > OVERRIDE
    assert estimate.shot_runtime == pytest.approx(estimate.d_t * 1e-6 * estimate.logical_cycles)


def test_shot_success_uses_adjusted_cycles(table: ComponentTable) -> None:
    """Test shot success counts the cycles stretched by T-state rejection, as RSA does."""
    estimate = fh_estimate(FHParams(L=16, t_override=OVERRIDE), Regime.P_1E4, 1e-6, table)
    hardware = application_hardware(Application.FERMI_HUBBARD, Regime.P_1E4, 1e-6, table)
    expected = shot_success(
        estimate.logical_qubits,
        estimate.logical_cycles,
        estimate.t_count,
        hardware.p_L,
        hardware.engine.p_T,
    )
    assert estimate.logical_cycles > OVERRIDE
    assert estimate.shot_success == pytest.approx(expected, rel=1e-12)


def test_table_rows(table: ComponentTable) -> None:
    """Test the results table is L-major with one row per regime and cycle time."""
    rows = fh_table(ls=(8, 16), table=table)
    assert len(rows) == 2 * 2 * 2
    assert [row.params["L"] for row in rows[:4]] == [8, 8, 8, 8]
    assert rows[4].physical_qubits == 62154


def test_qubits_grow_with_lattice(table: ComponentTable) -> None:
    """Test physical qubits never shrink as the lattice grows."""
    rows = fh_table(ls=range(8, 33, 2), regimes=(Regime.P_1E3,), t_cs=(1e-6,), table=table)
    counts = [row.physical_qubits for row in rows]
    assert counts == sorted(counts)


# --- Cycle model ---


def test_cycles_roughly_constant_in_lattice() -> None:
    """Test cycles vary by less than 10% over even L at fixed W / L^2."""
    values = [fh_cycles(FHParams(L=L, W=0.5 * L**2)) for L in range(8, 33, 2)]
    assert max(values) < 1.1 * min(values)


def test_t_count_below_cycles() -> None:
    """Test the T count uses the smaller constant and stays below the cycle count."""
    params = FHParams(L=16, W=128.0)
    assert 0 < fh_t_count(params) < fh_cycles(params)


def test_optimal_x_inside_unit_interval() -> None:
    """Test the grid optimum lies strictly inside (0, 1) and a fixed x is kept."""
    assert 0 < optimal_x(FHParams(L=16, W=128.0)) < 1
    assert optimal_x(FHParams(L=16, W=128.0, x=0.3)) == 0.3


def test_fixed_x_never_beats_optimum() -> None:
    """Test the optimised split is at least as good as a fixed one."""
    best = fh_cycles(FHParams(L=16, W=128.0))
    for x in (0.1, 0.5, 0.9):
        assert best <= fh_cycles(FHParams(L=16, W=128.0, x=x)) * (1 + 1e-9)


def test_override_returned_verbatim() -> None:
    """Test the cycle override bypasses the model."""
    assert fh_cycles(FHParams(L=16, W=128.0, t_override=1234.0)) == 1234.0


@pytest.mark.parametrize(
    "params",
    [
        FHParams(L=15, t_override=OVERRIDE),
        FHParams(L=0, t_override=OVERRIDE),
        FHParams(L=16, u=5, t_override=OVERRIDE),
        FHParams(L=16, W=128.0, x=1.0),
        FHParams(L=16, W=-1.0),
        FHParams(L=16, t_override=-5.0),
        FHParams(L=16),
    ],
)
def test_invalid_parameters(params: FHParams) -> None:
    """Test invalid instances raise ParameterError."""
    with pytest.raises(ParameterError):
        fh_cycles(params)


# --- Estimate endpoint ---


@pytest.mark.asyncio
async def test_fh_route(async_client: AsyncClient) -> None:
    """Test the estimate endpoint defaults to the 8e6 cycle override."""
    response = await async_client.post("/estimates/fermi-hubbard", json={"L": 16, "regime": "1e-3"})
    assert response.status_code == status.HTTP_200_OK
    data = response.json()
    assert data["physical_qubits"] == 62154
    assert data["d"] == 24
    assert data["application"] == "fermi_hubbard"


@pytest.mark.asyncio
async def test_fh_route_odd_lattice(async_client: AsyncClient) -> None:
    """Test an odd lattice side is rejected with 422."""
    response = await async_client.post("/estimates/fermi-hubbard", json={"L": 15})
    assert response.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
    assert "L=15" in response.json()["detail"]

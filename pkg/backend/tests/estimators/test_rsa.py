"""
tests/estimators/test_rsa.py

Test cases for the parallelised RSA estimate.
Covers the subroutine accounting, register and memory sizes, shot counts,
range validation, feasibility reasons and the parallelisation sweep.
"""

import pytest

from app.arch.schemas import Regime
from app.core.exceptions import ParameterError
from app.data.loader import ComponentTable
from app.estimators.rsa import (
    SUBROUTINE_ORDER,
    expected_shots,
    feasibility_reason,
    loop3_rows,
    loop4_rows,
    phaseup_size,
    rsa_cycles_and_shots,
    rsa_logical_qubits,
    rsa_qubits,
    rsa_subroutine_costs,
    spacetime_sweep,
    subroutine_table,
    validate_ranges,
    working_register_size,
)
from app.estimators.schemas import Application, RSAParams, default_m
from app.estimators.services import ApplicationHardware, application_hardware


@pytest.fixture
def params() -> RSAParams:
    """Reference point on the d=24 code (k=16, so w1=8)."""
    return RSAParams(s=3, f=25, ell=20, w1=8, w3=3, w4=4, rho=1, m=1088)


@pytest.fixture
def hardware(table: ComponentTable) -> ApplicationHardware:
    return application_hardware(Application.RSA, Regime.P_1E3, 1e-6, table)


# --- Subroutine accounting ---


def test_lookup_loop4_cycles() -> None:
    """Test Lookup (Loop 4) costs 9 ceil(ell/w4) (2^w4 - w4 - 1) cycles."""
    lookup = next(row for row in loop4_rows(20, 30, 4) if row.name == "Lookup (Loop 4)")
    assert lookup.logical_cycles == 495
    assert lookup.t_count == 330


def test_phaseup_loop31() -> None:
    """Test the single Loop 3.1 phaseup at w3=2."""
    row = next(row for row in loop3_rows(20, 2) if row.name == "Phaseup (Loop 3.1)")
    assert row.t_count == 8
    assert row.logical_cycles == 12
    assert row.instances == 1


@pytest.mark.parametrize(("w", "size"), [(2, 0), (3, 1), (4, 2), (5, 5), (6, 8)])
def test_phaseup_size(w: int, size: int) -> None:
    """Test 2^ceil(w/2) + 2^floor(w/2) - w - 2."""
    assert phaseup_size(w) == size


def test_cycles_are_three_halves_of_t_count(params: RSAParams) -> None:
    """Test every row but the loop 1 lookup spends 3/2 cycles per T gate."""
    for row in subroutine_table(params):
        if row.name == "Lookup (Loop 1)":
            assert row.logical_cycles > 1.5 * row.t_count
        else:
            assert 2 * row.logical_cycles == 3 * row.t_count


def test_table_order_and_totals(params: RSAParams) -> None:
    """Test the ten rows come in table order and sum to tau1 and Sigma."""
    report = rsa_subroutine_costs(params)
    assert [row.name for row in report.rows] == list(SUBROUTINE_ORDER)
    assert report.tau1 == sum(row.t_count for row in report.rows)
    assert report.Sigma == sum(row.logical_cycles for row in report.rows)
    assert report.upsilon > 0


# --- Registers and qubits ---


def test_default_input_size() -> None:
    """Test m defaults to ceil(n/2) + ceil(n/(2s))."""
    assert default_m(2048, 1) == 2048
    assert default_m(2048, 3) == 1024 + 342
    assert RSAParams(s=3, f=25, ell=20, w1=8, w3=3, w4=4).input_size == 1366


def test_working_register(params: RSAParams) -> None:
    """Test kappa = f + 2 ell + len(m) + 2 max(f, ell + len(m)) + 1."""
    assert params.len_m == 11
    assert working_register_size(params) == 139


def test_physical_qubits(params: RSAParams, hardware: ApplicationHardware) -> None:
    """Test working and memory qubits at rho=1 on the d=24 code."""
    qubits = rsa_qubits(params, hardware)
    assert qubits.kappa == 139
    assert qubits.working == 1620 * 9 + 8694 == 23274
    assert qubits.memory == 1020 * 68 + 150 == 69510
    assert qubits.total == 23274 + 69510
    assert qubits.logical_qubits == 1088 + 139


def test_input_register_shared(params: RSAParams) -> None:
    """Test one input register serves ceil(m/w1) working registers."""
    windows = params.windows
    assert windows == 136
    shared = params.model_copy(update={"rho": windows})
    assert rsa_logical_qubits(shared) == 1088 + windows * 139
    extra = params.model_copy(update={"rho": windows + 1})
    assert rsa_logical_qubits(extra) == 2 * 1088 + (windows + 1) * 139


# --- Shots ---


def test_expected_shots() -> None:
    """Test (s+1) / (0.99 p_S (1 - 2n sqrt((s+2)/(2^(f+1) s w1))))."""
    assert expected_shots(3, 40, 8, 2048, 0.9) == pytest.approx(4.50, abs=0.01)


def test_shots_diverge_for_short_accumulator() -> None:
    """Test a non-positive truncation factor yields no shot count."""
    assert expected_shots(1, 24, 1, 2048, 0.9) is None


def test_estimate(params: RSAParams, hardware: ApplicationHardware) -> None:
    """Test a feasible point reports consistent runtime and spacetime."""
    estimate = rsa_cycles_and_shots(params, hardware)
    assert estimate.feasible
    assert estimate.reason is None
    assert estimate.physical_qubits == 92784
    assert estimate.params["kappa"] == 139
    assert 0 < estimate.shot_success <= 1
    assert estimate.expected_shots is not None and estimate.expected_shots >= params.s + 1
    assert estimate.total_runtime == pytest.approx(estimate.expected_shots * estimate.shot_runtime)
    assert estimate.spacetime == pytest.approx(1227 * estimate.logical_cycles)


# --- Validation ---


@pytest.mark.parametrize(
    "update",
    [{"s": 0}, {"s": 17}, {"f": 23}, {"f": 60}, {"ell": 26}, {"w3": 1}, {"w4": 7}, {"rho": 10**6}],
)
def test_out_of_range(params: RSAParams, update: dict[str, int]) -> None:
    """Test parameters outside their search ranges are rejected."""
    with pytest.raises(ParameterError):
        validate_ranges(params.model_copy(update=update))


def test_too_few_primes(params: RSAParams, hardware: ApplicationHardware) -> None:
    """Test ell=18 leaves too few primes for the residue system."""
    point = params.model_copy(update={"ell": 18})
    reason = feasibility_reason(point)
    assert reason is not None and "primes" in reason
    assert not rsa_cycles_and_shots(point, hardware).feasible


def test_enough_primes(params: RSAParams) -> None:
    assert feasibility_reason(params) is None


# --- Parallelisation ---


def test_spacetime_saving(params: RSAParams) -> None:
    """Test rho=100 cuts time almost 100-fold while space grows sub-linearly."""
    serial, parallel = spacetime_sweep(params, [1, 100])
    report = rsa_subroutine_costs(params)
    log_term = 6 * (params.f - 1) * 7
    assert parallel.logical_cycles <= (
        serial.logical_cycles / 100 + report.Sigma + report.upsilon + log_term
    )
    assert parallel.logical_qubits < 100 * serial.logical_qubits
    assert parallel.naive_qubits == 100 * serial.logical_qubits
    assert parallel.saving > 1
    assert serial.saving == pytest.approx(1.0)


def test_cycles_non_increasing_in_rho(params: RSAParams) -> None:
    """Test parallel cycles fall with rho up to the log2 rho correction."""
    rows = spacetime_sweep(params, [1, 2, 4, 8, 16, 32, 64])
    core = [row.logical_cycles - 6 * (params.f - 1) * (row.rho - 1).bit_length() for row in rows]
    assert core == sorted(core, reverse=True)


def test_sweep_rejects_bad_rho(params: RSAParams) -> None:
    with pytest.raises(ParameterError):
        spacetime_sweep(params, [0])

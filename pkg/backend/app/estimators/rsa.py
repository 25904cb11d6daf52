"""
backend/app/estimators/rsa.py

Parallelised RSA Factoring Estimates

Residue-number-system factoring with rho working registers sharing one
input register per ceil(m/w1) registers:
- per-prime subroutine accounting (T count and logical cycles)
- working register size, logical qubits and physical qubits
- logical cycles, T count, shot success and expected shots
- parameter validation and feasibility reasons
- parallelisation spacetime sweep
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass

from app.arch.schemas import Regime
from app.core.exceptions import ParameterError
from app.core.formatting import humanize_qubits, humanize_seconds
from app.data.loader import ComponentTable
from app.estimators.schemas import (
    Application,
    ResourceEstimate,
    RSAParams,
    SpacetimeRow,
    SubroutineRead,
    SubroutineReport,
    prime_count_estimate,
)
from app.estimators.services import ApplicationHardware, application_hardware, shot_success

logger = logging.getLogger(__name__)

S_RANGE = range(1, 17)
F_RANGE = range(24, 60)
ELL_RANGE = range(18, 26)
W3_RANGE = range(2, 7)
W4_RANGE = range(2, 7)
SUCCESS_FACTOR = 0.99
T_FRACTION = 2 / 3
SUBROUTINE_ORDER = (
    "Lookup (Loop 1)",
    "Addition (Loop 1)",
    "Addition (Loop 2)",
    "Lookup (Loop 3)",
    "Addition (Loop 3)",
    "Lookup (Loop 4)",
    "Addition (Loop 4)",
    "Phaseup (Loop 4)",
    "Phaseup (Loop 3.2)",
    "Phaseup (Loop 3.1)",
)


# ---------------------------------------------------
# Subroutine Accounting
# ---------------------------------------------------
def phaseup_size(w: int) -> int:
    """2^ceil(w/2) + 2^floor(w/2) - w - 2."""
    return 2 ** (-(-w // 2)) + 2 ** (w // 2) - w - 2


@dataclass(frozen=True, slots=True)
class Subroutine:
    name: str
    size: float
    instances: float
    t_count: int
    logical_cycles: int


def input_loop_rows(w1: int, ell: int, length: int, windows: int) -> list[Subroutine]:
    """Loops 1 and 2; Lookup (Loop 1) carries 2 w1 extra cycles of frame cleaning."""
    c = windows
    lookup = 2**w1 - w1 - 1
    return [
        Subroutine("Lookup (Loop 1)", w1, c, 4 * c * lookup, c * (6 * lookup + 2 * w1)),
        Subroutine(
            "Addition (Loop 1)",
            ell + length,
            c,
            4 * c * (ell + length - 1),
            6 * c * (ell + length - 1),
        ),
        Subroutine(
            "Addition (Loop 2)",
            (2 * ell + length + 1) / 2,
            4 * length,
            8 * length * (2 * ell + length - 1),
            12 * length * (2 * ell + length - 1),
        ),
    ]


def loop3_rows(ell: int, w3: int) -> list[Subroutine]:
    a = -(-ell // w3)
    q = 4 * a * a - 8 * a + 1
    a2 = a * a - 2 * a
    lookup = 2 ** (2 * w3) - 2 * w3 - 1
    phase = phaseup_size(w3)
    phase_all = 2 ** (w3 + 1) - 2 * w3 - 2
    return [
        Subroutine("Lookup (Loop 3)", 2 * w3, q, 4 * q * lookup, 6 * q * lookup),
        Subroutine("Addition (Loop 3)", ell, 7 * a2, 28 * a2 * (ell - 1), 42 * (ell - 1) * a2),
        Subroutine("Phaseup (Loop 3.2)", w3, 3 * a2 / 2, 6 * a2 * phase, 9 * a2 * phase),
        Subroutine("Phaseup (Loop 3.1)", 2 * w3, 1, 4 * phase_all, 6 * phase_all),
    ]


def loop4_rows(ell: int, f: int, w4: int) -> list[Subroutine]:
    b = -(-ell // w4)
    lookup = 2**w4 - w4 - 1
    phase = phaseup_size(w4)
    return [
        Subroutine("Lookup (Loop 4)", w4, 3 * b / 2, 6 * b * lookup, 9 * b * lookup),
        Subroutine("Addition (Loop 4)", f, 5 * b / 2, 10 * (f - 1) * b, 15 * (f - 1) * b),
        Subroutine("Phaseup (Loop 4)", w4, b, 4 * b * phase, 6 * b * phase),
    ]


def subroutine_table(params: RSAParams) -> list[Subroutine]:
    """The ten per-prime subroutines with their T counts and logical cycles, in table order."""
    rows = input_loop_rows(params.w1, params.ell, params.len_m, params.windows)
    rows += loop3_rows(params.ell, params.w3)
    rows += loop4_rows(params.ell, params.f, params.w4)
    order = {name: i for i, name in enumerate(SUBROUTINE_ORDER)}
    return sorted(rows, key=lambda row: order[row.name])


def uncompute_cycles(params: RSAParams) -> int:
    """upsilon: one loop 1 lookup and addition per window."""
    w1 = params.w1
    return params.windows * (6 * (2**w1 - w1 + params.ell + params.len_m - 2) + 2 * w1)


def rsa_subroutine_costs(params: RSAParams) -> SubroutineReport:
    """tau1 and Sigma summed over the subroutine table, plus upsilon."""
    rows = subroutine_table(params)
    return SubroutineReport(
        rows=[
            SubroutineRead(
                name=row.name,
                size=row.size,
                instances=row.instances,
                t_count=row.t_count,
                logical_cycles=row.logical_cycles,
            )
            for row in rows
        ],
        tau1=sum(row.t_count for row in rows),
        Sigma=sum(row.logical_cycles for row in rows),
        upsilon=uncompute_cycles(params),
    )


# ---------------------------------------------------
# Validation
# ---------------------------------------------------
def validate_ranges(params: RSAParams) -> None:
    """
    Raises:
        ParameterError: a parameter outside its search range, or rho > |P|.
    """
    checks = (
        ("s", params.s, S_RANGE),
        ("f", params.f, F_RANGE),
        ("ell", params.ell, ELL_RANGE),
        ("w3", params.w3, W3_RANGE),
        ("w4", params.w4, W4_RANGE),
    )
    for name, value, allowed in checks:
        if value not in allowed:
            raise ParameterError(
                f"{name}={value} outside [{allowed.start}, {allowed.stop - 1}]", key=name
            )
    if params.rho > params.prime_count:
        raise ParameterError(
            f"rho={params.rho} exceeds the number of primes |P|={params.prime_count}", key="rho"
        )


def feasibility_reason(params: RSAParams) -> str | None:
    """Why a parameter point cannot run, or None."""
    available = prime_count_estimate(params.ell)
    if available < params.prime_count:
        return (
            f"only ~{available:.0f} primes of {params.ell} bits, fewer than "
            f"|P|={params.prime_count}"
        )
    if params.ell < params.w1:
        return f"ell={params.ell} is smaller than the loop 1 window w1={params.w1}"
    return None


# ---------------------------------------------------
# Qubits
# ---------------------------------------------------
def working_register_size(params: RSAParams) -> int:
    """kappa = f + 2 ell + len(m) + 2 max(f, ell + len(m)) + 1."""
    f, ell, length = params.f, params.ell, params.len_m
    return f + 2 * ell + length + 2 * max(f, ell + length) + 1


def input_registers(params: RSAParams) -> int:
    """ceil(rho / ceil(m / w1))."""
    return -(-params.rho // params.windows)


def rsa_logical_qubits(params: RSAParams) -> int:
    """N = ceil(rho / ceil(m/w1)) m + rho kappa."""
    return input_registers(params) * params.input_size + params.rho * working_register_size(params)


@dataclass(frozen=True, slots=True)
class QubitBreakdown:
    kappa: int
    logical_qubits: int
    working: int
    memory: int

    @property
    def total(self) -> int:
        return self.working + self.memory


def rsa_qubits(params: RSAParams, hardware: ApplicationHardware) -> QubitBreakdown:
    """
    n_w = rho (n_pb ceil(kappa/k) + n_me);
    n_m = 2n ceil(rho / ceil(m/w1)) ceil(m/k) + rho (n_g + n_b).
    """
    code = hardware.code
    kappa = working_register_size(params)
    working = params.rho * (code.n_pb * -(-kappa // code.k) + hardware.engine.n_me)
    memory_blocks = -(-params.input_size // code.k)
    memory = 2 * code.n * input_registers(params) * memory_blocks + params.rho * (
        code.n_g + code.n_b
    )
    return QubitBreakdown(kappa, rsa_logical_qubits(params), working, memory)


# ---------------------------------------------------
# Cycles, T Count and Shots
# ---------------------------------------------------
def rsa_ideal_cycles(params: RSAParams, sigma: int, upsilon: int) -> int:
    """T' = ceil(|P|/rho) Sigma + upsilon + 6 (f-1) ceil(log2 rho)."""
    iterations = -(-params.prime_count // params.rho)
    return iterations * sigma + upsilon + 6 * (params.f - 1) * params.log_rho


def rsa_t_count(params: RSAParams, tau1: int, upsilon: int) -> float:
    """tau = |P| tau1 + (2/3) upsilon + 4 (f-1) ceil(log2 rho)."""
    return params.prime_count * tau1 + T_FRACTION * upsilon + 4 * (params.f - 1) * params.log_rho


def truncation_factor(s: int, f: int, w1: int, n_bits: int) -> float:
    """1 - 2 n sqrt((s+2) / (2^(f+1) s w1)), with n the modulus bit length."""
    return 1 - 2 * n_bits * math.sqrt((s + 2) / (2 ** (f + 1) * s * w1))


def expected_shots(s: int, f: int, w1: int, n_bits: int, p_success: float) -> float | None:
    """(s+1) / (0.99 p_S truncation); None when the truncation factor is not positive."""
    factor = truncation_factor(s, f, w1, n_bits)
    if factor <= 0 or p_success <= 0:
        return None
    return (s + 1) / (SUCCESS_FACTOR * p_success * factor)


def rsa_cycles_and_shots(params: RSAParams, hardware: ApplicationHardware) -> ResourceEstimate:
    """
    Full estimate for one parameter point.

    Raises:
        ParameterError: parameter outside its range.
    """
    validate_ranges(params)
    report = rsa_subroutine_costs(params)
    qubits = rsa_qubits(params, hardware)

    ideal = rsa_ideal_cycles(params, report.Sigma, report.upsilon)
    cycles = hardware.availability * ideal
    t_count = rsa_t_count(params, report.tau1, report.upsilon)
    p_success = shot_success(
        qubits.logical_qubits, cycles, t_count, hardware.p_L, hardware.engine.p_T
    )
    shots = expected_shots(params.s, params.f, params.w1, params.n_bits, p_success)
    shot_runtime = hardware.logical_cycle_time * cycles
    total_runtime = shots * shot_runtime if shots is not None else None

    reason = feasibility_reason(params)
    if reason is None and shots is None:
        reason = "truncation error too large: expected shot count diverges"
    spacetime = qubits.logical_qubits * cycles

    return ResourceEstimate(
        application=Application.RSA,
        regime=hardware.regime,
        d=hardware.d,
        d_t=hardware.d_t,
        t_c=hardware.t_c,
        feasible=reason is None,
        reason=reason,
        logical_qubits=qubits.logical_qubits,
        logical_cycles=cycles,
        logical_cycles_ideal=ideal,
        t_count=t_count,
        physical_qubits=qubits.total,
        shot_runtime=shot_runtime,
        expected_shots=shots,
        total_runtime=total_runtime,
        shot_success=p_success,
        p_L=hardware.p_L,
        spacetime=spacetime,
        failure_budget=spacetime * hardware.p_L,
        physical_qubits_human=humanize_qubits(qubits.total),
        total_runtime_human=humanize_seconds(total_runtime) if total_runtime is not None else "-",
        params={**params.model_dump(), "m": params.input_size, "kappa": qubits.kappa},
    )


def rsa_estimate(
    params: RSAParams,
    regime: Regime,
    t_c: float,
    table: ComponentTable | None = None,
) -> ResourceEstimate:
    hardware = application_hardware(Application.RSA, regime, t_c, table)
    return rsa_cycles_and_shots(params, hardware)


# ---------------------------------------------------
# Spacetime Sweep
# ---------------------------------------------------
def spacetime_sweep(params: RSAParams, rhos: Iterable[int]) -> list[SpacetimeRow]:
    """Logical space, time and spacetime for each rho against the rho = 1 register."""
    report = rsa_subroutine_costs(params)
    baseline = params.model_copy(update={"rho": 1})
    baseline_qubits = rsa_logical_qubits(baseline)
    baseline_spacetime = baseline_qubits * rsa_ideal_cycles(
        baseline, report.Sigma, report.upsilon
    )
    rows = []
    for rho in rhos:
        if not 1 <= rho <= params.prime_count:
            raise ParameterError(f"rho={rho} outside [1, {params.prime_count}]", key="rho")
        point = params.model_copy(update={"rho": rho})
        logical = rsa_logical_qubits(point)
        cycles = rsa_ideal_cycles(point, report.Sigma, report.upsilon)
        spacetime = logical * cycles
        rows.append(
            SpacetimeRow(
                rho=rho,
                logical_qubits=logical,
                logical_cycles=cycles,
                spacetime=spacetime,
                naive_qubits=rho * baseline_qubits,
                baseline_spacetime=baseline_spacetime,
                saving=baseline_spacetime / spacetime,
            )
        )
    logger.debug(f"[RSA] spacetime sweep over {len(rows)} rho values")
    return rows

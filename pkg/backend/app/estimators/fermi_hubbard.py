"""
backend/app/estimators/fermi_hubbard.py

Fermi-Hubbard Ground-State Energy Estimates

One shot of plaquette-Trotterised phase estimation on a single processing
unit with a magic engine and no memory:
- logical cycles and T count as functions of W and the error split x
- x optimised over a grid when unset
- physical qubits n_pb ceil(N/k) + n_me and per-shot runtime
- the published results table for even L
"""

import logging
import math
from collections.abc import Iterable

import numpy as np
import numpy.typing as npt

from app.arch.schemas import Regime
from app.core.exceptions import ParameterError
from app.core.formatting import humanize_qubits, humanize_seconds
from app.data.loader import ComponentTable
from app.estimators.schemas import (
    ENERGY_PER_SITE,
    Application,
    FHParams,
    ResourceEstimate,
)
from app.estimators.services import ApplicationHardware, application_hardware, shot_success

logger = logging.getLogger(__name__)

PREFACTOR = 6.203
LOG_COEFFICIENT = 1.15
CYCLES_CONSTANT = 11.2
T_COUNT_CONSTANT = 9.2
X_GRID = np.linspace(0.005, 0.995, 199)
DEFAULT_LATTICES = tuple(range(8, 33, 2))


# ---------------------------------------------------
# Validation
# ---------------------------------------------------
def validate_fh(params: FHParams) -> None:
    if params.L < 2 or params.L % 2:
        raise ParameterError(f"Lattice side must be even and at least 2, got L={params.L}")
    if params.u not in ENERGY_PER_SITE:
        raise ParameterError(
            f"Coupling u must be one of {sorted(ENERGY_PER_SITE)}, got {params.u}"
        )
    if params.x is not None and not 0 < params.x < 1:
        raise ParameterError(f"Error split x must lie in (0, 1), got {params.x}")
    if params.W is not None and params.W <= 0:
        raise ParameterError(f"Trotter error bound W must be positive, got {params.W}")
    if params.t_override is not None and params.t_override <= 0:
        raise ParameterError(f"Cycle override must be positive, got {params.t_override}")


# ---------------------------------------------------
# Cycle and T Counts
# ---------------------------------------------------
def _count(params: FHParams, x: npt.ArrayLike, constant: float) -> npt.NDArray[np.float64]:
    if params.W is None:
        raise ParameterError("Trotter error bound W is required unless t_override is set")
    xs = np.asarray(x, dtype=np.float64)
    W, eps = params.W, params.epsilon
    n_r, n_t = params.rotations_per_step, params.t_gates_per_step
    steps = PREFACTOR * np.sqrt(W / (eps * (1 - xs)) ** 3)
    synthesis = LOG_COEFFICIENT * np.log2(
        n_r * math.sqrt(3 * W) / (xs * np.sqrt(1 - xs) * math.sqrt(eps**3))
    )
    return np.asarray(steps * (n_r * (synthesis + constant) + n_t), dtype=np.float64)


def optimal_x(params: FHParams, constant: float = CYCLES_CONSTANT) -> float:
    """Grid point minimising the count; the configured x when one is set."""
    validate_fh(params)
    if params.x is not None:
        return params.x
    values = _count(params, X_GRID, constant)
    return float(X_GRID[int(np.argmin(values))])


def _evaluate(params: FHParams, constant: float) -> float:
    validate_fh(params)
    if params.t_override is not None:
        return float(params.t_override)
    x = optimal_x(params, constant)
    return float(_count(params, x, constant))


def fh_cycles(params: FHParams) -> float:
    """
    Logical cycles (T gates plus logical measurements) of one shot.

    Returns t_override verbatim when set; otherwise evaluates the count with
    constant 11.2 at the configured or grid-optimal x.

    Raises:
        ParameterError: odd L, unknown u, x outside (0, 1) or W missing/non-positive.
    """
    return _evaluate(params, CYCLES_CONSTANT)


def fh_t_count(params: FHParams) -> float:
    """T count of one shot (constant 9.2); the cycle override also bounds it."""
    return _evaluate(params, T_COUNT_CONSTANT)


# ---------------------------------------------------
# Physical Cost
# ---------------------------------------------------
def fh_physical_qubits(L: int, hardware: ApplicationHardware) -> int:
    """n_pb ceil((2L^2 + 2)/k) + n_me."""
    logical = 2 * L**2 + 2
    blocks = -(-logical // hardware.code.k)
    return hardware.code.n_pb * blocks + hardware.engine.n_me


def fh_estimate(
    params: FHParams,
    regime: Regime,
    t_c: float,
    table: ComponentTable | None = None,
) -> ResourceEstimate:
    """Per-shot resource estimate; runtime is d_t t_c T (2/3 alpha + 1/3)."""
    validate_fh(params)
    hardware = application_hardware(Application.FERMI_HUBBARD, regime, t_c, table)
    ideal = fh_cycles(params)
    t_count = fh_t_count(params)
    cycles = hardware.availability * ideal
    logical = params.logical_qubits
    physical = fh_physical_qubits(params.L, hardware)
    runtime = hardware.logical_cycle_time * cycles
    spacetime = logical * ideal
    logger.debug(
        f"[FH] L={params.L} regime={hardware.regime.value} d={hardware.d} "
        f"qubits={physical} cycles={cycles:.4g} runtime={runtime:.4g}s"
    )
    return ResourceEstimate(
        application=Application.FERMI_HUBBARD,
        regime=hardware.regime,
        d=hardware.d,
        d_t=hardware.d_t,
        t_c=t_c,
        logical_qubits=logical,
        logical_cycles=cycles,
        logical_cycles_ideal=ideal,
        t_count=t_count,
        physical_qubits=physical,
        shot_runtime=runtime,
        expected_shots=1.0,
        total_runtime=runtime,
        shot_success=shot_success(logical, cycles, t_count, hardware.p_L, hardware.engine.p_T),
        p_L=hardware.p_L,
        spacetime=spacetime,
        failure_budget=spacetime * hardware.p_L,
        physical_qubits_human=humanize_qubits(physical),
        total_runtime_human=humanize_seconds(runtime),
        params=params.model_dump(),
    )


def fh_table(
    ls: Iterable[int] = DEFAULT_LATTICES,
    regimes: Iterable[Regime] = (Regime.P_1E3, Regime.P_1E4),
    t_cs: Iterable[float] = (1e-6, 1e-3),
    t_override: float = 8.0e6,
    table: ComponentTable | None = None,
) -> list[ResourceEstimate]:
    """Estimates for every (L, regime, t_c), L-major."""
    regime_list, t_c_list = list(regimes), list(t_cs)
    rows = [
        fh_estimate(FHParams(L=L, t_override=t_override), regime, t_c, table)
        for L in ls
        for regime in regime_list
        for t_c in t_c_list
    ]
    logger.info(f"[FH] results table with {len(rows)} rows")
    return rows

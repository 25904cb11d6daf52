"""
backend/app/estimators/optimizer.py

RSA Parameter Optimiser

Grid search over (s, f, ell, w3, w4, rho) for one hardware profile:
- loop 3 / loop 4 window sizes fixed per (ell, f) to the cycle-minimising pair
- rho searched on a geometric grid then refined around the best grid point,
  or enumerated in full
- min-qubits under a runtime cap, or min-runtime under a qubit cap
- heatmap over code cycle times and qubit budgets, and the results table
"""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from app.arch.schemas import HardwareProfile, Regime
from app.core.exceptions import ParameterError
from app.core.formatting import (
    SECONDS_PER_DAY,
    SECONDS_PER_MONTH,
    SECONDS_PER_YEAR,
    humanize_qubits,
    humanize_seconds,
)
from app.data.loader import ComponentTable
from app.estimators.rsa import (
    ELL_RANGE,
    F_RANGE,
    S_RANGE,
    SUCCESS_FACTOR,
    T_FRACTION,
    W3_RANGE,
    W4_RANGE,
    Subroutine,
    input_loop_rows,
    loop3_rows,
    loop4_rows,
    rsa_cycles_and_shots,
    uncompute_cycles,
)
from app.estimators.schemas import (
    Application,
    HeatmapCell,
    Objective,
    OptimizationResult,
    ResourceEstimate,
    ResultsTableRow,
    RhoStrategy,
    RSAParams,
    bit_length,
    default_m,
    prime_count_estimate,
)
from app.estimators.services import ApplicationHardware, application_hardware

logger = logging.getLogger(__name__)

GRID_POINTS = 48
REFINED_ROWS = 3
RUNTIME_CAPS = {
    "1 year": SECONDS_PER_YEAR,
    "1 month": SECONDS_PER_MONTH,
    "1 week": 7 * SECONDS_PER_DAY,
    "1 day": SECONDS_PER_DAY,
}


# ---------------------------------------------------
# Search Task
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class Machine:
    """Scalar view of ApplicationHardware that pickles cheaply into worker processes."""

    n_bits: int
    w1: int
    k: int
    n: int
    n_pb: int
    n_me: int
    n_port: int
    log_keep_L: float
    log_keep_T: float
    availability: float
    cycle_time: float

    @classmethod
    def from_hardware(cls, hardware: ApplicationHardware, n_bits: int) -> "Machine":
        code = hardware.code
        return cls(
            n_bits=n_bits,
            w1=code.k // 2,
            k=code.k,
            n=code.n,
            n_pb=code.n_pb,
            n_me=hardware.engine.n_me,
            n_port=code.n_g + code.n_b,
            log_keep_L=float(np.log1p(-hardware.p_L)),
            log_keep_T=float(np.log1p(-hardware.engine.p_T)),
            availability=hardware.availability,
            cycle_time=hardware.logical_cycle_time,
        )


@dataclass(frozen=True, slots=True)
class SearchTask:
    machine: Machine
    s: int
    m: int | None
    objective: Objective
    cap: float | None
    strategy: RhoStrategy
    f_values: tuple[int, ...]
    ell_values: tuple[int, ...]


@dataclass(frozen=True, slots=True, order=True)
class Candidate:
    """Ordered by objective value, then the other metric, then the parameter tuple."""

    value: float
    secondary: float
    key: tuple[int, int, int, int, int, int]


@dataclass(frozen=True, slots=True)
class _Rows:
    """Per-f quantities at fixed (s, ell)."""

    f: npt.NDArray[np.int64]
    w4: npt.NDArray[np.int64]
    tau1: npt.NDArray[np.float64]
    sigma: npt.NDArray[np.float64]
    kappa: npt.NDArray[np.int64]
    truncation: npt.NDArray[np.float64]


# ---------------------------------------------------
# Window Sizes
# ---------------------------------------------------
def _cost(rows: Sequence[Subroutine]) -> tuple[int, int]:
    return sum(row.t_count for row in rows), sum(row.logical_cycles for row in rows)


def best_w3(ell: int) -> tuple[int, int, int]:
    """(w3, T count, cycles) of loop 3 minimising cycles, smallest w3 on ties."""
    options = [(_cost(loop3_rows(ell, w3))[::-1], w3) for w3 in W3_RANGE]
    (cycles, t_count), w3 = min(options)
    return w3, t_count, cycles


def best_w4(ell: int, f: int) -> tuple[int, int, int]:
    options = [(_cost(loop4_rows(ell, f, w4))[::-1], w4) for w4 in W4_RANGE]
    (cycles, t_count), w4 = min(options)
    return w4, t_count, cycles


# ---------------------------------------------------
# Vectorised Evaluation
# ---------------------------------------------------
def _evaluate(
    task: SearchTask,
    rows: _Rows,
    m: int,
    primes: int,
    upsilon: int,
    rho: npt.NDArray[np.int64],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """(physical qubits, expected runtime) over an (f, rho) grid."""
    mc = task.machine
    f = rows.f[:, None].astype(np.float64)
    r = rho[None, :]
    log_rho = np.ceil(np.log2(r.astype(np.float64)))
    windows = -(-m // mc.w1)
    inputs = -(-r // windows)

    ideal = (-(-primes // r)) * rows.sigma[:, None] + upsilon + 6 * (f - 1) * log_rho
    cycles = mc.availability * ideal
    t_count = primes * rows.tau1[:, None] + T_FRACTION * upsilon + 4 * (f - 1) * log_rho
    logical = inputs * m + r * rows.kappa[:, None]

    blocks = -(-rows.kappa // mc.k)
    working = r * (mc.n_pb * blocks[:, None] + mc.n_me)
    memory = 2 * mc.n * inputs * (-(-m // mc.k)) + r * mc.n_port
    qubits = (working + memory).astype(np.float64)

    success = np.exp(logical * cycles * mc.log_keep_L + t_count * mc.log_keep_T)
    truncation = rows.truncation[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        shots = np.where(
            truncation > 0, (task.s + 1) / (SUCCESS_FACTOR * success * truncation), np.inf
        )
    runtime = shots * mc.cycle_time * cycles
    return qubits, runtime


def _objective(
    task: SearchTask, qubits: npt.NDArray[np.float64], runtime: npt.NDArray[np.float64]
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    if task.objective is Objective.MIN_QUBITS:
        ok = np.isfinite(runtime) & (runtime <= (task.cap if task.cap is not None else np.inf))
        return np.where(ok, qubits, np.inf), runtime
    ok = np.isfinite(runtime) & (qubits <= (task.cap if task.cap is not None else np.inf))
    return np.where(ok, runtime, np.inf), qubits


def _row_best(
    value: npt.NDArray[np.float64], secondary: npt.NDArray[np.float64], rho: npt.NDArray[np.int64]
) -> int:
    return int(np.lexsort((rho, secondary, value))[0])


def rho_grid(primes: int, points: int = GRID_POINTS) -> npt.NDArray[np.int64]:
    """Distinct integers on a geometric grid over [1, primes]."""
    grid = np.unique(np.rint(np.geomspace(1, primes, num=points)).astype(np.int64))
    return np.asarray(grid[(grid >= 1) & (grid <= primes)], dtype=np.int64)


def _search(task: SearchTask) -> tuple[list[Candidate], int]:
    """Best candidates for one Ekera-Hastad parameter s."""
    mc = task.machine
    m = task.m if task.m is not None else default_m(mc.n_bits, task.s)
    length = bit_length(m)
    windows = -(-m // mc.w1)
    candidates: list[Candidate] = []
    evaluated = 0

    for ell in task.ell_values:
        primes = -(-(mc.n_bits * m) // (ell * mc.w1))
        if prime_count_estimate(ell) < primes or ell < mc.w1:
            continue
        fixed_t, fixed_cycles = _cost(input_loop_rows(mc.w1, ell, length, windows))
        w3, t3, c3 = best_w3(ell)
        upsilon = uncompute_cycles(
            RSAParams(n_bits=mc.n_bits, s=task.s, f=24, ell=ell, w1=mc.w1, w3=w3, w4=2, m=m)
        )
        ratio = (task.s + 2) / (np.exp2(np.array(task.f_values) + 1.0) * task.s * mc.w1)
        per_f = [best_w4(ell, f) for f in task.f_values]
        f_arr = np.array(task.f_values, dtype=np.int64)
        rows = _Rows(
            f=f_arr,
            w4=np.array([w4 for w4, _, _ in per_f], dtype=np.int64),
            tau1=np.array([fixed_t + t3 + t4 for _, t4, _ in per_f], dtype=np.float64),
            sigma=np.array([fixed_cycles + c3 + c4 for _, _, c4 in per_f], dtype=np.float64),
            kappa=f_arr + 2 * ell + length + 2 * np.maximum(f_arr, ell + length) + 1,
            truncation=1 - 2 * mc.n_bits * np.sqrt(ratio),
        )

        if task.strategy is RhoStrategy.FULL:
            grid = np.arange(1, primes + 1, dtype=np.int64)
        else:
            grid = rho_grid(primes)
        value, secondary = _objective(task, *_evaluate(task, rows, m, primes, upsilon, grid))
        evaluated += value.size

        row_best = [_row_best(value[i], secondary[i], grid) for i in range(len(rows.f))]
        order = sorted(range(len(rows.f)), key=lambda i: (value[i, row_best[i]], i))
        refine = order if task.strategy is RhoStrategy.FULL else order[:REFINED_ROWS]
        for i in refine:
            j = row_best[i]
            if not np.isfinite(value[i, j]):
                continue
            rhos = grid
            row_value, row_secondary = value[i], secondary[i]
            if task.strategy is RhoStrategy.GEOMETRIC:
                low = int(grid[max(j - 1, 0)])
                high = int(grid[min(j + 1, len(grid) - 1)])
                rhos = np.arange(low, high + 1, dtype=np.int64)
                single = _Rows(
                    rows.f[i : i + 1],
                    rows.w4[i : i + 1],
                    rows.tau1[i : i + 1],
                    rows.sigma[i : i + 1],
                    rows.kappa[i : i + 1],
                    rows.truncation[i : i + 1],
                )
                refined_value, refined_secondary = _objective(
                    task, *_evaluate(task, single, m, primes, upsilon, rhos)
                )
                evaluated += refined_value.size
                row_value, row_secondary = refined_value[0], refined_secondary[0]
            best = _row_best(row_value, row_secondary, rhos)
            if np.isfinite(row_value[best]):
                key = (task.s, int(rows.f[i]), ell, w3, int(rows.w4[i]), int(rhos[best]))
                candidates.append(
                    Candidate(float(row_value[best]), float(row_secondary[best]), key)
                )
    return candidates, evaluated


# ---------------------------------------------------
# Public Operations
# ---------------------------------------------------
def rsa_optimize(
    profile: HardwareProfile,
    objective: Objective = Objective.MIN_QUBITS,
    cap: float | None = None,
    n_bits: int = 2048,
    m: int | None = None,
    strategy: RhoStrategy = RhoStrategy.GEOMETRIC,
    workers: int = 1,
    s_values: Iterable[int] = S_RANGE,
    f_values: Iterable[int] = F_RANGE,
    ell_values: Iterable[int] = ELL_RANGE,
    table: ComponentTable | None = None,
) -> OptimizationResult:
    """
    Best parameter point for a hardware profile.

    The regime (hence code and magic engine) follows the profile's error rate.
    No feasible point is a result with feasible=False, not an exception.

    Raises:
        ParameterError: non-positive cap or worker count.
    """
    if cap is not None and cap <= 0:
        raise ParameterError(f"Cap must be positive, got {cap}")
    if workers < 1:
        raise ParameterError(f"Worker count must be positive, got {workers}")
    hardware = application_hardware(Application.RSA, profile.regime, profile.t_c, table)
    machine = Machine.from_hardware(hardware, n_bits)
    tasks = [
        SearchTask(
            machine, s, m, objective, cap, strategy, tuple(f_values), tuple(ell_values)
        )
        for s in s_values
    ]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search, tasks))
    else:
        results = [_search(task) for task in tasks]

    candidates = [candidate for found, _ in results for candidate in found]
    evaluated = sum(count for _, count in results)
    logger.info(
        f"[OPTIMIZER] regime={hardware.regime.value} t_c={profile.t_c:g} "
        f"objective={objective.value} cap={cap} evaluated={evaluated} "
        f"candidates={len(candidates)}"
    )
    if not candidates:
        return OptimizationResult(
            objective=objective,
            regime=hardware.regime,
            t_c=profile.t_c,
            cap=cap,
            feasible=False,
            reason="no parameter point satisfies the cap",
            evaluated=evaluated,
        )

    best = min(candidates)
    s, f, ell, w3, w4, rho = best.key
    params = RSAParams(
        n_bits=n_bits, s=s, f=f, ell=ell, w1=machine.w1, w3=w3, w4=w4, rho=rho, m=m
    )
    estimate = rsa_cycles_and_shots(params, hardware)
    return OptimizationResult(
        objective=objective,
        regime=hardware.regime,
        t_c=profile.t_c,
        cap=cap,
        feasible=estimate.feasible,
        reason=estimate.reason,
        params=params,
        estimate=estimate,
        evaluated=evaluated,
    )


def _runtime_label(estimate: ResourceEstimate | None) -> str:
    if estimate is None or estimate.total_runtime is None:
        return "-"
    return humanize_seconds(estimate.total_runtime)


def heatmap(
    p: float,
    t_cs: Sequence[float],
    qubit_caps: Sequence[int],
    workers: int = 1,
    strategy: RhoStrategy = RhoStrategy.GEOMETRIC,
    table: ComponentTable | None = None,
) -> list[HeatmapCell]:
    """
    Optimal expected runtime per (t_c, qubit budget) cell, t_c-major.

    A point feasible under a smaller budget stays a candidate for every larger
    one, so runtime never rises with the budget and a feasible cell never turns
    infeasible as the budget grows.
    """
    cells = []
    for t_c in t_cs:
        profile = HardwareProfile(p=p, t_c=t_c)
        by_cap: dict[int, OptimizationResult] = {}
        best: OptimizationResult | None = None
        for qubit_cap in sorted(set(qubit_caps)):
            result = rsa_optimize(
                profile,
                Objective.MIN_RUNTIME,
                cap=qubit_cap,
                strategy=strategy,
                workers=workers,
                table=table,
            )
            if best is None or _faster(result, best):
                best = result
            by_cap[qubit_cap] = best
        for qubit_cap in qubit_caps:
            result = by_cap[qubit_cap]
            estimate = result.estimate if result.feasible else None
            cells.append(
                HeatmapCell(
                    t_c=t_c,
                    qubit_cap=qubit_cap,
                    feasible=estimate is not None,
                    total_runtime=estimate.total_runtime if estimate else None,
                    total_runtime_human=_runtime_label(estimate),
                    physical_qubits=estimate.physical_qubits if estimate else None,
                    rho=result.params.rho if estimate and result.params else None,
                )
            )
    logger.info(f"[OPTIMIZER] heatmap with {len(cells)} cells at p={p:g}")
    return cells


def _faster(result: OptimizationResult, incumbent: OptimizationResult) -> bool:
    if not result.feasible or result.estimate is None:
        return False
    if not incumbent.feasible or incumbent.estimate is None:
        return True
    runtime = result.estimate.total_runtime
    previous = incumbent.estimate.total_runtime
    return runtime is not None and (previous is None or runtime <= previous)


def results_table(
    t_cs: Sequence[float] = (1e-6, 1e-5, 1e-4, 1e-3),
    regimes: Sequence[Regime] = (Regime.P_1E3, Regime.P_1E4),
    runtime_caps: Sequence[float] = tuple(RUNTIME_CAPS.values()),
    workers: int = 1,
    table: ComponentTable | None = None,
) -> list[ResultsTableRow]:
    """Minimum physical qubits per (t_c, p, runtime cap)."""
    rows = []
    for t_c in t_cs:
        for regime in regimes:
            profile = HardwareProfile(p=regime.p, t_c=t_c)
            for cap in runtime_caps:
                result = rsa_optimize(
                    profile, Objective.MIN_QUBITS, cap=cap, workers=workers, table=table
                )
                estimate = result.estimate if result.feasible else None
                rows.append(
                    ResultsTableRow(
                        t_c=t_c,
                        p=regime.p,
                        runtime_cap=cap,
                        feasible=estimate is not None,
                        physical_qubits=estimate.physical_qubits if estimate else None,
                        physical_qubits_human=(
                            humanize_qubits(estimate.physical_qubits) if estimate else "-"
                        ),
                        total_runtime=estimate.total_runtime if estimate else None,
                        total_runtime_human=_runtime_label(estimate),
                    )
                )
    return rows

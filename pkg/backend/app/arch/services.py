"""
backend/app/arch/services.py

Architecture Component Models

Qubit counts and error rates of the architecture's components:
- Fitted logical error ansatz (memory and logical-measurement experiments)
- Magic engines for both error-rate regimes
- Processing units, memory with ports and the cyclic-shift schedule
- Code selection against a logical failure budget
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from app.arch.schemas import (
    ErrorRateRead,
    Experiment,
    HardwareProfile,
    MagicEngineRead,
    Regime,
)
from app.core.exceptions import ConfigError, ParameterError
from app.data.loader import CodeRow, ComponentTable, FitRow, MagicEngineRow, load_components

logger = logging.getLogger(__name__)


# ---------------------------------------------------
# Hardware
# ---------------------------------------------------
def ensure_not_reaction_limited(profile: HardwareProfile, d_t: int) -> None:
    if profile.reaction_limited(d_t):
        raise ParameterError(
            f"d_t={d_t} code cycles per logical cycle is below the reaction time of 10 t_c",
            d_t=d_t,
        )


# ---------------------------------------------------
# Error Ansatz
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class ErrorFit:
    experiment: Experiment
    A: float
    B: float
    C: float
    A_interval: tuple[float, float] = (0.0, 0.0)
    B_interval: tuple[float, float] = (0.0, 0.0)
    C_interval: tuple[float, float] = (0.0, 0.0)

    @classmethod
    def from_row(cls, experiment: Experiment, row: FitRow) -> "ErrorFit":
        return cls(
            experiment=experiment,
            A=row.A.value,
            B=row.B.value,
            C=row.C.value,
            A_interval=(row.A.low, row.A.high),
            B_interval=(row.B.low, row.B.high),
            C_interval=(row.C.low, row.C.high),
        )

    def pessimistic(self) -> "ErrorFit":
        """Interval endpoint maximising the logical error rate."""
        return ErrorFit(self.experiment, self.A_interval[1], self.B_interval[0], self.C_interval[0])

    def optimistic(self) -> "ErrorFit":
        return ErrorFit(self.experiment, self.A_interval[0], self.B_interval[1], self.C_interval[1])


def get_fit(
    experiment: Experiment = Experiment.LOGICAL_MEASUREMENT, table: ComponentTable | None = None
) -> ErrorFit:
    table = table or load_components()
    try:
        row = table.error_fits[experiment.value]
    except KeyError:
        raise ConfigError(f"Component table has no '{experiment.value}' fit", key="error_fits")
    return ErrorFit.from_row(experiment, row)


def logical_error_rate(fit: ErrorFit, p: float, k: int, d: int) -> float:
    """
    p_L = (A/k)·(p/B)^(d/2 + C) per logical qubit and logical cycle.

    Raises:
        ParameterError: p outside (0, B), or non-positive k or d.
    """
    if not 0 < p < fit.B:
        raise ParameterError(f"Ansatz only valid below threshold: need 0 < p < {fit.B}, got {p}")
    if k < 1 or d < 1:
        raise ParameterError(f"Need k >= 1 and d >= 1, got k={k}, d={d}")
    return (fit.A / k) * (p / fit.B) ** (d / 2 + fit.C)


def error_rate_interval(fit: ErrorFit, p: float, k: int, d: int) -> tuple[float, float, float]:
    """(optimistic, central, pessimistic) rates from the 95% interval endpoints."""
    return (
        logical_error_rate(fit.optimistic(), p, k, d),
        logical_error_rate(fit, p, k, d),
        logical_error_rate(fit.pessimistic(), p, k, d),
    )


def error_rate_table(
    fit: ErrorFit,
    ps: Iterable[float] = (1e-3, 1e-4),
    codes: Sequence[CodeRow] | None = None,
    sensitivity: bool = False,
) -> list[ErrorRateRead]:
    """Rates for every (p, family member) pair, p-major."""
    rows = list(codes) if codes is not None else list(load_components().codes)
    out: list[ErrorRateRead] = []
    for p in ps:
        for row in rows:
            central = logical_error_rate(fit, p, row.k, row.d)
            low = high = None
            if sensitivity:
                low, _, high = error_rate_interval(fit, p, row.k, row.d)
            out.append(
                ErrorRateRead(
                    experiment=fit.experiment,
                    p=p,
                    d=row.d,
                    k=row.k,
                    p_L=central,
                    p_L_optimistic=low,
                    p_L_pessimistic=high,
                )
            )
    return out


# ---------------------------------------------------
# Magic Engines
# ---------------------------------------------------
def distilled_infidelity(p_in: float) -> float:
    """Output infidelity of 15-to-1 distillation, 35 p_in^3."""
    return 35 * p_in**3


def rejection_from_distillation(p_in: float) -> float:
    """Leading-order rejection probability, 15 p_in."""
    return 15 * p_in


def alpha(p_r: float) -> float:
    """Expected logical cycles per accepted T state, 1/(1 - p_r)."""
    if not 0 <= p_r < 1:
        raise ParameterError(f"Rejection probability must lie in [0, 1), got {p_r}")
    return 1.0 / (1.0 - p_r)


@dataclass(frozen=True, slots=True)
class MagicEngineSpec:
    regime: Regime
    n_me: int
    p_r: float
    p_T: float
    n_cb: int
    n_g: int
    n_a: int
    d_a: int
    n_alpha: int
    d_e: int
    r: int
    p_in: float

    @property
    def recomputed_n_me(self) -> int:
        return self.n_cb + 16 * self.n_g + 60 * (self.n_a + self.d_a - 1) + self.n_alpha

    def fits_in_cycle(self, d_t: int) -> bool:
        """Injection and its rounds complete within one logical cycle: d_a + r <= d_t."""
        return self.d_a + self.r <= d_t


def magic_engine_spec(regime: Regime, table: ComponentTable | None = None) -> MagicEngineSpec:
    """
    Magic engine for a regime, with the stored total checked against its components.

    Raises:
        ParameterError: unknown regime.
        ConfigError: stored n_me disagrees with the component formula.
    """
    table = table or load_components()
    try:
        row: MagicEngineRow = table.magic_engines[Regime(regime).value]
    except (KeyError, ValueError):
        raise ParameterError(f"Unknown regime '{regime}'", regime=str(regime))
    spec = MagicEngineSpec(
        regime=Regime(regime),
        n_me=row.n_me,
        p_r=row.p_r,
        p_T=row.p_T,
        n_cb=row.n_cb,
        n_g=row.n_g,
        n_a=row.n_a,
        d_a=row.d_a,
        n_alpha=row.n_alpha,
        d_e=row.d_e,
        r=row.r,
        p_in=row.p_in,
    )
    if spec.recomputed_n_me != spec.n_me:
        raise ConfigError(
            f"Magic engine {spec.regime.value}: stored n_me={spec.n_me} but components give "
            f"{spec.recomputed_n_me}",
            key=f"magic_engines.{spec.regime.value}.n_me",
        )
    return spec


def magic_engine_read(spec: MagicEngineSpec) -> MagicEngineRead:
    return MagicEngineRead(
        regime=spec.regime,
        n_me=spec.n_me,
        n_me_recomputed=spec.recomputed_n_me,
        n_cb=spec.n_cb,
        n_g=spec.n_g,
        n_a=spec.n_a,
        d_a=spec.d_a,
        n_alpha=spec.n_alpha,
        d_e=spec.d_e,
        r=spec.r,
        p_r=spec.p_r,
        alpha=alpha(spec.p_r),
        p_T=spec.p_T,
        p_in=spec.p_in,
        distilled_infidelity=distilled_infidelity(spec.p_in),
    )


# ---------------------------------------------------
# Processing Units
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class UnitCost:
    blocks: int
    physical_qubits: int
    logical_qubits: int


def unit_cost(code: CodeRow, beta: int) -> UnitCost:
    """A processing unit of beta bridged processing blocks."""
    if beta < 1:
        raise ParameterError(f"A processing unit needs at least one block, got beta={beta}")
    return UnitCost(blocks=beta, physical_qubits=beta * code.n_pb, logical_qubits=beta * code.k)


def blocks_for(logical_qubits: int, code: CodeRow) -> int:
    """Smallest beta with beta·k >= logical_qubits."""
    return max(1, -(-logical_qubits // code.k))


# ---------------------------------------------------
# Memory
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class MemorySpec:
    """nu code blocks of `code`, windows of w logical qubits, rho ports."""

    code: CodeRow
    nu: int
    rho: int
    w: int | None = None

    def __post_init__(self) -> None:
        if self.nu < 1:
            raise ParameterError(f"Memory needs at least one block, got nu={self.nu}")
        if self.rho < 0:
            raise ParameterError(f"Port count must be non-negative, got rho={self.rho}")
        if self.code.k % self.window != 0:
            raise ParameterError(f"Window size {self.window} must divide k={self.code.k}")

    @property
    def window(self) -> int:
        return self.w if self.w is not None else self.code.k // 2

    @property
    def window_count(self) -> int:
        return self.nu * self.code.k // self.window

    @property
    def logical_qubits(self) -> int:
        return self.nu * self.code.k


def memory_cost(spec: MemorySpec) -> int:
    """2·nu·n storage qubits plus n_g + n_b per port."""
    return 2 * spec.nu * spec.code.n + spec.rho * (spec.code.n_g + spec.code.n_b)


@dataclass(frozen=True, slots=True)
class ShiftRound:
    """
    One logical cycle of cyclic shifting; `positions[b]` is block b's slot afterwards.

    `swaps` lists slot pairs (i, i+1 mod nu), not qubit pairs; `qubit_swaps`
    expands them for a concrete layout.
    """

    index: int
    swaps: tuple[tuple[int, int], ...]
    positions: tuple[int, ...]

    def qubit_swaps(self, n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
        """
        (inter-slot, local) SWAP qubit pairs for blocks of n data qubits.

        Slot i holds data qubits 2ni .. 2ni+n-1 and ancillas 2ni+n .. 2ni+2n-1.
        """
        if n < 1:
            raise ParameterError(f"Block size must be positive, got n={n}")
        inter = [
            (2 * n * i + j, 2 * n * nxt + n + j) for i, nxt in self.swaps for j in range(n)
        ]
        slots = range(len(self.positions))
        local = [(2 * n * i + j, 2 * n * i + n + j) for i in slots for j in range(n)]
        return inter, local


def memory_shift_schedule(nu: int) -> list[ShiftRound]:
    """
    nu rounds; in each, data qubit j of the block in slot i swaps with ancilla
    qubit j of slot i+1 (mod nu), then each slot swaps data and ancilla locally.
    Every block advances exactly one slot per round.

    Rounds are recorded per slot, not per qubit; `ShiftRound.qubit_swaps`
    gives the data/ancilla qubit indices.
    """
    if nu < 1:
        raise ParameterError(f"Shift schedule needs nu >= 1, got {nu}")
    rounds = []
    for r in range(1, nu + 1):
        swaps = tuple((i, (i + 1) % nu) for i in range(nu))
        positions = tuple((b + r) % nu for b in range(nu))
        rounds.append(ShiftRound(index=r, swaps=swaps, positions=positions))
    return rounds


def window_port_coverage(schedule: Sequence[ShiftRound], port_slots: Iterable[int]) -> bool:
    """True if every block (hence every window) visits every port slot during the schedule."""
    nu = len(schedule)
    ports = set(port_slots)
    for block in range(nu):
        visited = {block} | {rnd.positions[block] for rnd in schedule}
        if not ports <= visited:
            return False
    return True


# ---------------------------------------------------
# Code Selection
# ---------------------------------------------------
def select_code(
    p: float,
    spacetime: float,
    budget: float = 0.1,
    fit: ErrorFit | None = None,
    table: ComponentTable | None = None,
) -> CodeRow | None:
    """Smallest family member with p_L · spacetime <= budget, or None."""
    table = table or load_components()
    fit = fit or get_fit(Experiment.LOGICAL_MEASUREMENT, table)
    for row in sorted(table.codes, key=lambda r: r.n):
        failure = logical_error_rate(fit, p, row.k, row.d) * spacetime
        if failure <= budget:
            logger.debug(f"[ARCH] select_code p={p} N*T={spacetime:.3g} -> d={row.d}")
            return row
    return None


def regime_code(application: str, regime: Regime, table: ComponentTable | None = None) -> CodeRow:
    """Code distance an application uses in a regime (component table mapping)."""
    table = table or load_components()
    mapping = getattr(table.regime_codes, application, None)
    if mapping is None or regime.value not in mapping:
        raise ConfigError(f"No code mapping for {application} at regime {regime.value}")
    return table.code_row_by_distance(mapping[regime.value])

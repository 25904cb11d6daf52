"""
backend/app/codes/services.py

Generalised Bicycle Codes

Construction and verification of the GB code family used for processing
blocks and memory:
- build_code: checks from (l, A, B) with the CSS condition verified
- compute_k, check_weights, is_shift_invariant
- distance_upper_bound: exhaustive kernel enumeration or information-set sampling
- CodeService: family members, block costs and the verified parameter table
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from app.codes.schemas import BlockCostsRead, CodeRead, DistanceMethod
from app.core.exceptions import (
    CodeConstructionError,
    ConfigError,
    DistanceBudgetError,
    ParameterError,
)
from app.data.loader import CodeRow, ComponentTable, load_components
from app.gf2.bitmatrix import BitMatrix, Echelon, complement_basis, echelon

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_KERNEL_DIM = 26
DEFAULT_RANDOMIZED_BUDGET = 50


# ---------------------------------------------------
# Code Type
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class GBCode:
    """GB code on n = 2l qubits: sector L is columns 0..l-1, sector R is l..2l-1."""

    l: int
    A: tuple[int, ...]
    B: tuple[int, ...]
    hx: BitMatrix
    hz: BitMatrix
    k: int
    d_claimed: int | None = None

    @property
    def n(self) -> int:
        return 2 * self.l

    @property
    def d_t(self) -> int:
        """Code cycles per logical cycle."""
        if self.d_claimed is None:
            raise ParameterError("Code has no claimed distance, so d_t is undefined")
        return self.d_claimed + 2


def _check_rows(l: int, A: Sequence[int], B: Sequence[int]) -> tuple[list[int], list[int]]:
    hx_rows, hz_rows = [], []
    for j in range(l):
        x_row = 0
        z_row = 0
        for a in A:
            x_row ^= 1 << ((j + a) % l)
            z_row ^= 1 << (l + (j - a) % l)
        for b in B:
            x_row ^= 1 << (l + (j + b) % l)
            z_row ^= 1 << ((j - b) % l)
        hx_rows.append(x_row)
        hz_rows.append(z_row)
    return hx_rows, hz_rows


def build_code(
    l: int, A: Sequence[int], B: Sequence[int], d_claimed: int | None = None
) -> GBCode:
    """
    Builds the GB code with checks
    S_X,j = prod_a X_(j+a),L prod_b X_(j+b),R and S_Z,j = prod_a Z_(j-a),R prod_b Z_(j-b),L.

    Raises:
        ParameterError: A or B not a set of residues mod l.
        CodeConstructionError: hx·hzᵀ != 0.
    """
    if l < 1:
        raise ParameterError(f"Lift size must be positive, got {l}")
    for name, group in (("A", A), ("B", B)):
        if len(set(group)) != len(group) or any(not 0 <= g < l for g in group):
            raise ParameterError(f"{name}={list(group)} must be distinct residues mod {l}")

    hx_rows, hz_rows = _check_rows(l, A, B)
    hx = BitMatrix(rows=tuple(hx_rows), n_cols=2 * l)
    hz = BitMatrix(rows=tuple(hz_rows), n_cols=2 * l)
    if not hx.times_transpose_is_zero(hz):
        raise CodeConstructionError(f"CSS condition violated for l={l}, A={A}, B={B}")

    k = 2 * l - hx.rank() - hz.rank()
    logger.debug(f"[CODES] built l={l} A={list(A)} B={list(B)} n={2 * l} k={k}")
    return GBCode(l=l, A=tuple(A), B=tuple(B), hx=hx, hz=hz, k=k, d_claimed=d_claimed)


def compute_k(code: GBCode) -> int:
    """n - rank(hx) - rank(hz) over GF(2)."""
    return code.n - code.hx.rank() - code.hz.rank()


def check_weights(code: GBCode) -> bool:
    """Rows have weight |A|+|B|; each sector's columns have weight |A| or |B|."""
    row_weight = len(code.A) + len(code.B)
    l = code.l
    expected = (
        (code.hx, len(code.A), len(code.B)),
        (code.hz, len(code.B), len(code.A)),
    )
    for matrix, left, right in expected:
        if any(weight != row_weight for weight in matrix.row_weights()):
            return False
        columns = matrix.column_weights()
        if any(w != left for w in columns[:l]) or any(w != right for w in columns[l:]):
            return False
    return True


def shift(bits: int, sigma: int, l: int) -> int:
    """Cyclic shift by sigma within each sector."""
    sigma %= l
    mask = (1 << l) - 1
    out = 0
    for offset in (0, l):
        sector = (bits >> offset) & mask
        rotated = ((sector << sigma) | (sector >> (l - sigma))) & mask if sigma else sector
        out |= rotated << offset
    return out


def is_shift_invariant(code: GBCode) -> bool:
    """Every cyclic shift maps the row spaces of hx and hz to themselves."""
    for matrix in (code.hx, code.hz):
        rows = set(matrix.rows)
        for sigma in range(1, code.l):
            for row in matrix.rows:
                shifted = shift(row, sigma, code.l)
                if shifted not in rows and not matrix.in_rowspace(shifted):
                    return False
    return True


def conjectured_parameters(m: int) -> tuple[int, int, int]:
    """[[2(2^m - 1), 2m, m + (m - 4)^2]] for family member m."""
    return 2 * (2**m - 1), 2 * m, m + (m - 4) ** 2


# ---------------------------------------------------
# Distance
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class DistanceResult:
    bound: int
    method: DistanceMethod
    exact: bool
    iterations: int
    witness: int
    side: str


def _side_matrices(code: GBCode, side: str) -> tuple[BitMatrix, BitMatrix]:
    """(checks the logical must commute with, stabilizers it must avoid)."""
    if side == "x":
        return code.hz, code.hx
    if side == "z":
        return code.hx, code.hz
    raise ParameterError(f"Unknown side '{side}', expected 'x' or 'z'")


def _scan_chunk(
    basis: tuple[int, ...], n_stab: int, free: int, base_vec: int, base_logical: int
) -> tuple[int, int]:
    """
    Gray-code walk over the low `free` basis coefficients.

    Basis entries below `n_stab` are stabilizers; the rest are logical
    representatives, so a vector lies outside the stabilizer space exactly
    when its logical coefficient mask is nonzero.
    """
    best, witness = math.inf, 0
    vec, logical = base_vec, base_logical
    if logical and vec.bit_count() < best:
        best, witness = vec.bit_count(), vec
    for i in range(1, 1 << free):
        j = (i & -i).bit_length() - 1
        vec ^= basis[j]
        if j >= n_stab:
            logical ^= 1 << (j - n_stab)
        if logical:
            weight = vec.bit_count()
            if weight < best:
                best, witness = weight, vec
    return (int(best) if best != math.inf else 0), witness


def _scan_chunk_star(args: tuple[tuple[int, ...], int, int, int, int]) -> tuple[int, int]:
    return _scan_chunk(*args)


def exhaustive_distance(
    code: GBCode, side: str = "x", workers: int = 1, max_kernel_dim: int = MAX_EXHAUSTIVE_KERNEL_DIM
) -> DistanceResult:
    """
    Exact minimum weight over ker(checks) minus rowspace(stabilizers).

    Raises:
        DistanceBudgetError: kernel dimension exceeds `max_kernel_dim`.
    """
    checks, stabs = _side_matrices(code, side)
    kernel = checks.kernel_basis()
    if len(kernel) > max_kernel_dim:
        raise DistanceBudgetError(
            f"Kernel dimension {len(kernel)} exceeds the exhaustive limit of {max_kernel_dim}",
            kernel_dim=len(kernel),
        )
    stab_basis = list(stabs.echelon().rows)
    logicals = complement_basis(stab_basis, kernel)
    basis = tuple(stab_basis + logicals)
    n_stab, n_logical = len(stab_basis), len(logicals)
    if n_logical == 0:
        raise CodeConstructionError("Code encodes no logical qubits; distance undefined")

    prefix_bits = 0
    if workers > 1:
        prefix_bits = min(n_logical, max(1, math.ceil(math.log2(4 * workers))))
    free = len(basis) - prefix_bits

    jobs = []
    for prefix in range(1 << prefix_bits):
        base_vec = 0
        for b in range(prefix_bits):
            if (prefix >> b) & 1:
                base_vec ^= basis[free + b]
        base_logical = prefix << (n_logical - prefix_bits)
        jobs.append((basis, n_stab, free, base_vec, base_logical))

    logger.info(
        f"[CODES] exhaustive {side}-distance n={code.n} kernel_dim={len(basis)} chunks={len(jobs)}"
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk_star, jobs))
    else:
        results = [_scan_chunk(*job) for job in jobs]

    candidates = [(weight, witness) for weight, witness in results if weight > 0]
    best, witness = min(candidates)
    return DistanceResult(
        bound=best,
        method=DistanceMethod.EXHAUSTIVE,
        exact=True,
        iterations=1 << len(basis),
        witness=witness,
        side=side,
    )


def _information_set_candidates(ech: Echelon, pairs: bool) -> list[int]:
    rows = list(ech.rows)
    if not pairs:
        return rows
    out = rows[:]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            out.append(rows[i] ^ rows[j])
    return out


def randomized_distance(
    code: GBCode,
    side: str = "x",
    budget: int = DEFAULT_RANDOMIZED_BUDGET,
    seed: int = 0,
    target: int | None = None,
    pairs: bool = True,
) -> DistanceResult:
    """
    Information-set sampling for a low-weight logical operator.

    Each round eliminates a kernel basis with pivots taken in a random column
    order; the reduced rows (and optionally their pairwise sums) are checked
    against the stabilizer row space. Stops early once `target` is reached.
    """
    if budget < 1:
        raise ParameterError(f"Randomized distance budget must be positive, got {budget}")
    checks, stabs = _side_matrices(code, side)
    kernel = checks.kernel_basis()
    stab_ech = stabs.echelon()
    rng = np.random.default_rng(seed)

    best, witness, rounds = code.n + 1, 0, 0
    for rounds in range(1, budget + 1):
        order = [int(c) for c in rng.permutation(code.n)]
        ech = echelon(kernel, code.n, column_order=order)
        for candidate in _information_set_candidates(ech, pairs):
            weight = candidate.bit_count()
            if 0 < weight < best and not stab_ech.contains(candidate):
                best, witness = weight, candidate
        if target is not None and best <= target:
            break

    logger.info(
        f"[CODES] randomized {side}-distance n={code.n} bound={best} after {rounds} round(s)"
    )
    return DistanceResult(
        bound=best,
        method=DistanceMethod.RANDOMIZED,
        exact=False,
        iterations=rounds,
        witness=witness,
        side=side,
    )


def distance_upper_bound(
    code: GBCode,
    method: DistanceMethod = DistanceMethod.EXHAUSTIVE,
    budget: int = DEFAULT_RANDOMIZED_BUDGET,
    seed: int = 0,
    side: str = "x",
    target: int | None = None,
    workers: int = 1,
) -> DistanceResult:
    """Dispatches to the exhaustive or randomized search for one side."""
    if method is DistanceMethod.EXHAUSTIVE:
        return exhaustive_distance(code, side=side, workers=workers)
    if method is DistanceMethod.RANDOMIZED:
        return randomized_distance(code, side=side, budget=budget, seed=seed, target=target)
    raise ParameterError(f"Distance method '{method.value}' does not search")


# ---------------------------------------------------
# Family Service
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class BlockCosts:
    m: int
    n_cb: int
    n_g: int
    n_b: int
    n_pb: int

    @property
    def recomputed_n_pb(self) -> int:
        return self.n_cb + 4 * self.n_g + 4 * self.n_b


@lru_cache(maxsize=32)
def _cached_code(l: int, A: tuple[int, ...], B: tuple[int, ...], d: int | None) -> GBCode:
    return build_code(l, A, B, d_claimed=d)


class CodeService:
    """
    Service layer over the code family in the component table.
    """

    def __init__(self, table: ComponentTable | None = None) -> None:
        self.table = table or load_components()

    def row(self, m: int) -> CodeRow:
        try:
            return self.table.code_row(m)
        except KeyError:
            known = [row.m for row in self.table.codes]
            raise ParameterError(f"Unknown family member m={m}; known: {known}", m=m)

    def row_for_distance(self, d: int) -> CodeRow:
        try:
            return self.table.code_row_by_distance(d)
        except KeyError:
            raise ParameterError(f"No family member with distance {d}", d=d)

    def family_code(self, m: int) -> GBCode:
        row = self.row(m)
        return _cached_code(row.l, tuple(row.A), tuple(row.B), row.d)

    def code_for_distance(self, d: int) -> GBCode:
        return self.family_code(self.row_for_distance(d).m)

    def block_costs(self, m: int) -> BlockCosts:
        """
        Stored block costs with n_pb recomputed.

        Raises:
            ParameterError: unknown m.
            ConfigError: stored n_pb disagrees with n_cb + 4 n_g + 4 n_b.
        """
        row = self.row(m)
        costs = BlockCosts(m=m, n_cb=row.n_cb, n_g=row.n_g, n_b=row.n_b, n_pb=row.n_pb)
        if costs.recomputed_n_pb != costs.n_pb:
            raise ConfigError(
                f"Component table n_pb={row.n_pb} for m={m} disagrees with "
                f"n_cb + 4 n_g + 4 n_b = {costs.recomputed_n_pb}",
                key=f"codes.m={m}.n_pb",
            )
        return costs

    def costs_read(self, m: int) -> BlockCostsRead:
        costs = self.block_costs(m)
        return BlockCostsRead(m=m, n_cb=costs.n_cb, n_g=costs.n_g, n_b=costs.n_b, n_pb=costs.n_pb)

    def verify_member(
        self,
        m: int,
        distance: bool = True,
        budget: int = DEFAULT_RANDOMIZED_BUDGET,
        seed: int = 0,
        workers: int = 1,
    ) -> CodeRead:
        """Builds member m and checks CSS, weights, k, shift invariance and distance."""
        row = self.row(m)
        code = self.family_code(m)
        costs = self.block_costs(m)

        d_bound: int | None = None
        method = DistanceMethod.NONE
        if distance:
            results = []
            for side in ("x", "z"):
                checks, _ = _side_matrices(code, side)
                kernel_dim = code.n - checks.rank()
                if kernel_dim <= MAX_EXHAUSTIVE_KERNEL_DIM:
                    results.append(exhaustive_distance(code, side=side, workers=workers))
                else:
                    results.append(
                        randomized_distance(code, side, budget=budget, seed=seed, target=row.d)
                    )
            d_bound = min(result.bound for result in results)
            exact = all(result.exact for result in results)
            method = DistanceMethod.EXHAUSTIVE if exact else DistanceMethod.RANDOMIZED

        if code.k != row.k:
            logger.warning(f"[CODES] m={m}: computed k={code.k} differs from table k={row.k}")

        return CodeRead(
            m=m,
            l=row.l,
            n=code.n,
            k=code.k,
            d_claimed=row.d,
            d_verified_or_bound=d_bound,
            d_method=method,
            d_t=code.d_t,
            css_ok=code.hx.times_transpose_is_zero(code.hz),
            weights_ok=check_weights(code),
            shift_invariant=is_shift_invariant(code),
            n_cb=costs.n_cb,
            n_g=costs.n_g,
            n_b=costs.n_b,
            n_pb=costs.n_pb,
        )

    def verify_table(
        self,
        distance: bool = True,
        budget: int = DEFAULT_RANDOMIZED_BUDGET,
        seed: int = 0,
        workers: int = 1,
    ) -> list[CodeRead]:
        """The verified family table, one row per member in table order."""
        rows = [
            self.verify_member(row.m, distance=distance, budget=budget, seed=seed, workers=workers)
            for row in self.table.codes
        ]
        logger.info(f"[CODES] verified {len(rows)} family members (distance={distance})")
        return rows


def block_costs(m: int) -> BlockCosts:
    """Block costs of family member m from the built-in table."""
    return CodeService().block_costs(m)

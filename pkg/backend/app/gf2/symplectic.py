"""
backend/app/gf2/symplectic.py

Pauli Vectors and Symplectic Matrices over GF(2)

A Pauli operator on n qubits is a vector v in Z_2^{2n} with bit i the X part
and bit n+i the Z part of qubit i; phases are not tracked. A Clifford acts by
right multiplication v -> v·M, so row i of M is the image of basis vector i.

- PauliVec / SymplecticMat: immutable, bit-packed
- symplectic_product, transvection, apply_clifford, compose, is_symplectic
- standard gate matrices, inverse, qubit permutation, block embedding
- random_symplectic test-support generator
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from app.core.exceptions import DimensionMismatchError, NotSymplecticError
from app.gf2.bitmatrix import iter_bits, pack_bits, parity, transpose, unpack_bits


# ---------------------------------------------------
# Domain Types
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class PauliVec:
    """Element of Z_2^{2n}; `bits` packs X part in bits 0..n-1, Z part in n..2n-1."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DimensionMismatchError(f"Qubit count must be non-negative, got {self.n}")
        if self.bits < 0 or self.bits >> (2 * self.n):
            raise DimensionMismatchError(f"Bits do not fit in 2n = {2 * self.n} entries")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "PauliVec":
        if len(entries) % 2:
            raise DimensionMismatchError(f"Pauli vector needs even length, got {len(entries)}")
        return cls(n=len(entries) // 2, bits=pack_bits(entries))

    def to_list(self) -> list[int]:
        return unpack_bits(self.bits, 2 * self.n)

    def bit(self, index: int) -> int:
        return (self.bits >> index) & 1

    @property
    def x_part(self) -> int:
        return self.bits & ((1 << self.n) - 1)

    @property
    def z_part(self) -> int:
        return self.bits >> self.n

    @property
    def support(self) -> list[int]:
        """Qubits on which the operator is not the identity."""
        return list(iter_bits(self.x_part | self.z_part))

    @property
    def weight(self) -> int:
        return (self.x_part | self.z_part).bit_count()

    def is_identity(self) -> bool:
        return self.bits == 0

    def __add__(self, other: "PauliVec") -> "PauliVec":
        _check_same_n(self.n, other.n)
        return PauliVec(self.n, self.bits ^ other.bits)

    def __str__(self) -> str:
        return pauli_to_string(self)


@dataclass(frozen=True, slots=True)
class SymplecticMat:
    """2n x 2n GF(2) matrix; `rows[i]` is a packed row of 2n bits."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != 2 * self.n:
            raise DimensionMismatchError(f"Expected {2 * self.n} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            if row < 0 or row >> (2 * self.n):
                raise DimensionMismatchError(f"Row {i} does not fit in {2 * self.n} columns")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "SymplecticMat":
        size = len(rows)
        if size % 2 or any(len(row) != size for row in rows):
            raise DimensionMismatchError("Matrix must be square with even dimension")
        return cls(n=size // 2, rows=tuple(pack_bits(row) for row in rows))

    @classmethod
    def from_dense(cls, dense: npt.ArrayLike) -> "SymplecticMat":
        array = np.asarray(dense, dtype=np.uint8) & 1
        if array.ndim != 2:
            raise DimensionMismatchError("Matrix must be two-dimensional")
        return cls.from_lists(array.tolist())

    def to_lists(self) -> list[list[int]]:
        return [unpack_bits(row, 2 * self.n) for row in self.rows]

    def to_dense(self) -> npt.NDArray[np.uint8]:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(2 * self.n, 2 * self.n)

    def row(self, index: int) -> PauliVec:
        return PauliVec(self.n, self.rows[index])


def _check_same_n(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"Qubit counts differ: {a} vs {b}")


# ---------------------------------------------------
# Constructors
# ---------------------------------------------------
def standard_basis(n: int, index: int) -> PauliVec:
    """Basis vector `index` of Z_2^{2n}: e_i for index < n, f_{index-n} otherwise."""
    if not 0 <= index < 2 * n:
        raise DimensionMismatchError(f"Basis index {index} out of range for n={n}")
    return PauliVec(n, 1 << index)


def pauli_from_string(label: str) -> PauliVec:
    """'XZIY' -> PauliVec on 4 qubits; qubit 0 is the leftmost letter."""
    text = label.strip().upper()
    n = len(text)
    bits = 0
    for q, letter in enumerate(text):
        if letter == "X":
            bits |= 1 << q
        elif letter == "Z":
            bits |= 1 << (n + q)
        elif letter == "Y":
            bits |= (1 << q) | (1 << (n + q))
        elif letter != "I":
            raise DimensionMismatchError(f"Unknown Pauli letter '{letter}' in '{label}'")
    return PauliVec(n, bits)


def pauli_to_string(v: PauliVec) -> str:
    letters = []
    for q in range(v.n):
        x, z = v.bit(q), v.bit(v.n + q)
        letters.append("IXZY"[x | (z << 1)])
    return "".join(letters)


def identity(n: int) -> SymplecticMat:
    return SymplecticMat(n, tuple(1 << i for i in range(2 * n)))


def symplectic_form(n: int) -> SymplecticMat:
    """J: identity blocks on the anti-diagonal."""
    return SymplecticMat(n, tuple(1 << ((i + n) % (2 * n)) for i in range(2 * n)))


# ---------------------------------------------------
# Core Operations
# ---------------------------------------------------
def symplectic_product(u: PauliVec, v: PauliVec) -> int:
    """u·J·vᵀ mod 2; 1 iff the Paulis anticommute."""
    _check_same_n(u.n, v.n)
    return _product_bits(u.bits, v.bits, u.n)


def _product_bits(u: int, v: int, n: int) -> int:
    mask = (1 << n) - 1
    return parity(((u & mask) & (v >> n)) ^ ((u >> n) & (v & mask)))


def transvection(u: PauliVec, v: PauliVec) -> PauliVec:
    """E_u(v) = v + <u,v> u, the action of conjugation by exp(i pi/4 P_u)."""
    _check_same_n(u.n, v.n)
    if _product_bits(u.bits, v.bits, u.n):
        return PauliVec(v.n, v.bits ^ u.bits)
    return v


def _apply_bits(rows: Sequence[int], v: int) -> int:
    out = 0
    for i in iter_bits(v):
        out ^= rows[i]
    return out


def apply_clifford(m: SymplecticMat, v: PauliVec) -> PauliVec:
    """Returns v·M."""
    _check_same_n(m.n, v.n)
    return PauliVec(v.n, _apply_bits(m.rows, v.bits))


def compose(m1: SymplecticMat, m2: SymplecticMat) -> SymplecticMat:
    """
    Matrix of "m1 first, then m2": the product M1·M2, so that
    apply_clifford(compose(m1, m2), v) == apply_clifford(m2, apply_clifford(m1, v)).
    """
    _check_same_n(m1.n, m2.n)
    return SymplecticMat(m1.n, tuple(_apply_bits(m2.rows, row) for row in m1.rows))


def is_symplectic(m: SymplecticMat) -> bool:
    """True iff M·J·Mᵀ = J, i.e. <row_i, row_j> = 1 exactly when |i - j| = n."""
    n = m.n
    for i in range(2 * n):
        for j in range(i, 2 * n):
            expected = 1 if j - i == n else 0
            if _product_bits(m.rows[i], m.rows[j], n) != expected:
                return False
    return True


def ensure_symplectic(m: SymplecticMat, what: str = "matrix") -> None:
    if not is_symplectic(m):
        raise NotSymplecticError(f"The {what} is not symplectic (M·J·Mᵀ != J)")


def transvection_matrix(u: PauliVec) -> SymplecticMat:
    """T_u = I + J uᵀ u; apply_clifford(T_u, v) == transvection(u, v)."""
    n = u.n
    rows = []
    for i in range(2 * n):
        basis = 1 << i
        rows.append(basis ^ u.bits if _product_bits(u.bits, basis, n) else basis)
    return SymplecticMat(n, tuple(rows))


def apply_transvection(m: SymplecticMat, u: PauliVec) -> SymplecticMat:
    """M·T_u, computed row-wise without building T_u."""
    _check_same_n(m.n, u.n)
    n = m.n
    return SymplecticMat(
        n,
        tuple(row ^ u.bits if _product_bits(u.bits, row, n) else row for row in m.rows),
    )


def inverse(m: SymplecticMat) -> SymplecticMat:
    """M⁻¹ = J·Mᵀ·J for symplectic M."""
    n = m.n
    cols = transpose(m.rows, 2 * n)
    swapped = [cols[(i + n) % (2 * n)] for i in range(2 * n)]
    return SymplecticMat(n, tuple(_swap_halves(row, n) for row in swapped))


def _swap_halves(bits: int, n: int) -> int:
    mask = (1 << n) - 1
    return ((bits & mask) << n) | (bits >> n)


# ---------------------------------------------------
# Standard Gates
# ---------------------------------------------------
SINGLE_QUBIT_GATES = frozenset({"H", "S", "SDG", "X", "Y", "Z", "SX", "SXDG", "I"})
TWO_QUBIT_GATES = frozenset({"CNOT", "CX", "CZ", "SWAP"})


def gate_matrix(name: str, qubits: Sequence[int], n: int) -> SymplecticMat:
    """
    Conjugation matrix of a named Clifford gate on `n` qubits.

    CNOT/CX take (control, target). Paulis (X, Y, Z) act trivially up to phase.
    """
    gate = name.upper()
    arity = 1 if gate in SINGLE_QUBIT_GATES else 2 if gate in TWO_QUBIT_GATES else 0
    if arity == 0:
        raise DimensionMismatchError(f"Unknown Clifford gate '{name}'")
    if len(qubits) != arity:
        raise DimensionMismatchError(f"Gate {gate} takes {arity} qubit(s), got {len(qubits)}")
    if any(not 0 <= q < n for q in qubits) or len(set(qubits)) != arity:
        raise DimensionMismatchError(f"Gate {gate} qubits {list(qubits)} invalid for n={n}")

    rows = [1 << i for i in range(2 * n)]
    e = lambda q: 1 << q  # noqa: E731
    f = lambda q: 1 << (n + q)  # noqa: E731

    if gate == "H":
        (q,) = qubits
        rows[q], rows[n + q] = f(q), e(q)
    elif gate in ("S", "SDG"):
        (q,) = qubits
        rows[q] = e(q) | f(q)
    elif gate in ("SX", "SXDG"):
        (q,) = qubits
        rows[n + q] = e(q) | f(q)
    elif gate in ("CNOT", "CX"):
        c, t = qubits
        rows[c] = e(c) | e(t)
        rows[n + t] = f(c) | f(t)
    elif gate == "CZ":
        a, b = qubits
        rows[a] = e(a) | f(b)
        rows[b] = e(b) | f(a)
    elif gate == "SWAP":
        a, b = qubits
        rows[a], rows[b] = e(b), e(a)
        rows[n + a], rows[n + b] = f(b), f(a)
    return SymplecticMat(n, tuple(rows))


# ---------------------------------------------------
# Structural Helpers
# ---------------------------------------------------
def _relabel(bits: int, order: Sequence[int], n: int) -> int:
    """New qubit j takes the entries of old qubit order[j]."""
    return _compact(bits, order, n)


def permute_vec(v: PauliVec, order: Sequence[int]) -> PauliVec:
    return PauliVec(v.n, _relabel(v.bits, order, v.n))


def permute_qubits(m: SymplecticMat, order: Sequence[int]) -> SymplecticMat:
    """
    Conjugates by the qubit relabelling new j <- old order[j], so that
    apply_clifford(result, permute_vec(v)) == permute_vec(apply_clifford(m, v)).
    """
    n = m.n
    if sorted(order) != list(range(n)):
        raise DimensionMismatchError(f"{list(order)} is not a permutation of {n} qubits")
    x_rows = [_relabel(m.rows[old], order, n) for old in order]
    z_rows = [_relabel(m.rows[n + old], order, n) for old in order]
    return SymplecticMat(n, tuple(x_rows + z_rows))


def _embed_bits(bits: int, n_small: int, offset: int, n_big: int) -> int:
    mask = (1 << n_small) - 1
    return ((bits & mask) << offset) | ((bits >> n_small) << (n_big + offset))


def embed_vec(v: PauliVec, offset: int, n_big: int) -> PauliVec:
    return PauliVec(n_big, _embed_bits(v.bits, v.n, offset, n_big))


def embed_block_diagonal(m1: SymplecticMat, m2: SymplecticMat) -> SymplecticMat:
    """M1 ⊕ M2 acting on qubits [0, n1) and [n1, n1 + n2)."""
    n1, n2 = m1.n, m2.n
    n = n1 + n2
    x_rows = [_embed_bits(r, n1, 0, n) for r in m1.rows[:n1]]
    x_rows += [_embed_bits(r, n2, n1, n) for r in m2.rows[:n2]]
    z_rows = [_embed_bits(r, n1, 0, n) for r in m1.rows[n1:]]
    z_rows += [_embed_bits(r, n2, n1, n) for r in m2.rows[n2:]]
    return SymplecticMat(n, tuple(x_rows + z_rows))


def restrict(m: SymplecticMat, qubits: Sequence[int]) -> SymplecticMat:
    """
    Restriction of a tensor-product frame to `qubits` (in the given order).

    Raises:
        NotSymplecticError: the rows of `qubits` have support outside them,
            so M does not factor over this split.
    """
    n = m.n
    keep = list(qubits)
    keep_mask = 0
    for q in keep:
        keep_mask |= (1 << q) | (1 << (n + q))
    rows: list[int] = []
    for source in keep + [n + q for q in keep]:
        row = m.rows[source]
        if row & ~keep_mask:
            raise NotSymplecticError(f"Frame row {source} leaves the restricted qubit set")
        rows.append(_compact(row, keep, n))
    return SymplecticMat(len(keep), tuple(rows))


def _compact(bits: int, keep: Sequence[int], n: int) -> int:
    k = len(keep)
    out = 0
    for j, old in enumerate(keep):
        if (bits >> old) & 1:
            out |= 1 << j
        if (bits >> (n + old)) & 1:
            out |= 1 << (k + j)
    return out


# ---------------------------------------------------
# Random Generator (test support)
# ---------------------------------------------------
def random_pauli(n: int, rng: np.random.Generator, nonzero: bool = True) -> PauliVec:
    while True:
        bits = pack_bits(rng.integers(0, 2, size=2 * n).tolist())
        if bits or not nonzero:
            return PauliVec(n, bits)


def random_symplectic(n: int, seed: int, num_transvections: int | None = None) -> SymplecticMat:
    """
    Random symplectic matrix: a random qubit permutation followed by
    `num_transvections` (default 2n²) random nonzero transvections.

    Deterministic given `seed`. Not uniform over the symplectic group.
    """
    if n < 1:
        raise DimensionMismatchError(f"random_symplectic needs n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    count = 2 * n * n if num_transvections is None else num_transvections
    order = [int(q) for q in rng.permutation(n)]
    m = permute_qubits(identity(n), order)
    for _ in range(count):
        m = apply_transvection(m, random_pauli(n, rng))
    return m

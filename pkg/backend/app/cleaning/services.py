"""
backend/app/cleaning/services.py

Clifford Frame Cleaning

Given a symplectic frame M on n qubits, emits Pauli pi/4 rotation axes
alpha_1..alpha_m such that M·T_{alpha_1}···T_{alpha_m} acts trivially on the
first w qubits:
- clean_general: any frame, at most four rotations per qubit
- clean_port: control-only (port) frames, at most two rotations per qubit
- is_port_form / is_trivial_on_prefix / verify_cleaning checks
"""

import logging
from dataclasses import dataclass

from app.cleaning.schemas import CleaningMode, CleanResponse
from app.core.exceptions import DimensionMismatchError, NotSymplecticError, PortFormError
from app.gf2.symplectic import (
    PauliVec,
    SymplecticMat,
    apply_transvection,
    ensure_symplectic,
    is_symplectic,
    pauli_to_string,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------
# Result Type
# ---------------------------------------------------
@dataclass(frozen=True, slots=True)
class CleaningResult:
    rotations: tuple[PauliVec, ...]
    residual: SymplecticMat

    @property
    def emitted_count(self) -> int:
        return len(self.rotations)


class _Cleaner:
    """Accumulates rotations while transforming the working frame."""

    def __init__(self, m: SymplecticMat, check_each_step: bool) -> None:
        self.frame = m
        self.rotations: list[PauliVec] = []
        self.check_each_step = check_each_step

    def emit(self, bits: int) -> None:
        axis = PauliVec(self.frame.n, bits)
        self.frame = apply_transvection(self.frame, axis)
        self.rotations.append(axis)
        if self.check_each_step and not is_symplectic(self.frame):
            raise NotSymplecticError(
                f"Frame lost symplecticity after rotation {len(self.rotations)}"
            )

    def result(self) -> CleaningResult:
        return CleaningResult(rotations=tuple(self.rotations), residual=self.frame)


def _check_width(m: SymplecticMat, w: int) -> None:
    if not 1 <= w <= m.n:
        raise DimensionMismatchError(f"Prefix width w={w} must lie in 1..{m.n}")


# ---------------------------------------------------
# General Frames
# ---------------------------------------------------
def clean_general(m: SymplecticMat, w: int, check_each_step: bool = False) -> CleaningResult:
    """
    Cleans the first w qubits of an arbitrary symplectic frame.

    Per qubit k the X row is brought to e_k with one or two transvections and
    then the Z row to f_k with one or two more, leaving rows already in place
    untouched. Emits at most 4w rotations.

    Raises:
        NotSymplecticError: M is not symplectic.
        DimensionMismatchError: w outside 1..n.
    """
    ensure_symplectic(m, "frame")
    _check_width(m, w)
    n = m.n
    cleaner = _Cleaner(m, check_each_step)

    for k in range(w):
        e_k = 1 << k
        f_k = 1 << (n + k)

        v = cleaner.frame.rows[k]
        if v != e_k:
            if (v >> (n + k)) & 1:
                cleaner.emit(v ^ e_k)
            else:
                if (v >> k) & 1:
                    u = f_k
                else:
                    # rows of earlier qubits are already clean, so v has no support there
                    delta = (v & -v).bit_length() - 1
                    assert delta >= 0, "symplectic frame has a zero row"
                    u = f_k ^ (1 << ((n + delta) % (2 * n)))
                cleaner.emit(v ^ u)
                cleaner.emit(e_k ^ u)

        v_tilde = cleaner.frame.rows[n + k]
        if v_tilde != f_k:
            if (v_tilde >> k) & 1:
                cleaner.emit(v_tilde ^ f_k)
            else:
                cleaner.emit(v_tilde ^ e_k ^ f_k)
                cleaner.emit(e_k)

    result = cleaner.result()
    logger.debug(f"[CLEANING] general n={n} w={w} emitted={result.emitted_count}")
    return result


# ---------------------------------------------------
# Port Frames
# ---------------------------------------------------
def port_form_violation(m: SymplecticMat, w: int) -> int | None:
    """
    First row breaking the port block structure, or None.

    Port form: rows 0..w-1 restricted to X-columns 0..w-1 form the identity,
    every other row vanishes on X-columns 0..w-1, and rows n..n+w-1 are
    exactly f_0..f_{w-1}.
    """
    n = m.n
    prefix_x = (1 << w) - 1
    for i, row in enumerate(m.rows):
        expected = (1 << i) if i < w else 0
        if row & prefix_x != expected:
            return i
        if n <= i < n + w and row != 1 << i:
            return i
    return None


def is_port_form(m: SymplecticMat, w: int) -> bool:
    return port_form_violation(m, w) is None


def clean_port(m: SymplecticMat, w: int, check_each_step: bool = False) -> CleaningResult:
    """
    Cleans the first w qubits of a port-form frame with at most 2w rotations.

    Every rotation has no X support on the prefix, so f_j stays fixed for all
    j in the prefix throughout.

    Raises:
        NotSymplecticError: M is not symplectic.
        PortFormError: M is not of port form; the message names the row.
    """
    ensure_symplectic(m, "frame")
    _check_width(m, w)
    violated = port_form_violation(m, w)
    if violated is not None:
        raise PortFormError(
            f"Frame is not of port form for w={w}: row {violated} violates the block structure",
            row=violated,
        )

    n = m.n
    cleaner = _Cleaner(m, check_each_step)
    for k in range(w):
        e_k = 1 << k
        f_k = 1 << (n + k)
        v = cleaner.frame.rows[k]
        if v == e_k:
            continue
        if (v >> (n + k)) & 1:
            cleaner.emit(v ^ e_k)
        else:
            cleaner.emit(v ^ e_k ^ f_k)
            cleaner.emit(f_k)

    result = cleaner.result()
    logger.debug(f"[CLEANING] port n={n} w={w} emitted={result.emitted_count}")
    return result


# ---------------------------------------------------
# Checks
# ---------------------------------------------------
def is_trivial_on_prefix(m: SymplecticMat, w: int) -> bool:
    """Literal comparison: rows k, n+k are e_k, f_k and columns k, n+k are clear elsewhere."""
    n = m.n
    for k in range(w):
        if m.rows[k] != 1 << k or m.rows[n + k] != 1 << (n + k):
            return False
        column_mask = (1 << k) | (1 << (n + k))
        for i, row in enumerate(m.rows):
            if i not in (k, n + k) and row & column_mask:
                return False
    return True


def verify_cleaning(m: SymplecticMat, result: CleaningResult, w: int) -> bool:
    """Replays the rotations on M and checks the residual."""
    frame = m
    for axis in result.rotations:
        frame = apply_transvection(frame, axis)
    return frame == result.residual and is_trivial_on_prefix(frame, w)


def clean(
    m: SymplecticMat, w: int, mode: CleaningMode, check_each_step: bool = False
) -> CleaningResult:
    if mode is CleaningMode.PORT:
        return clean_port(m, w, check_each_step)
    return clean_general(m, w, check_each_step)


def build_response(
    m: SymplecticMat, w: int, mode: CleaningMode, verify: bool = False
) -> CleanResponse:
    """Runs the requested procedure and packages the result for output."""
    result = clean(m, w, mode)
    bound = (2 if mode is CleaningMode.PORT else 4) * w
    logger.info(
        f"[CLEANING] mode={mode.value} n={m.n} w={w} emitted {result.emitted_count}/{bound}"
    )
    return CleanResponse(
        n=m.n,
        w=w,
        mode=mode,
        emitted_count=result.emitted_count,
        bound=bound,
        rotations=[pauli_to_string(axis) for axis in result.rotations],
        residual=result.residual.to_lists(),
        verified=verify_cleaning(m, result, w) if verify else None,
    )

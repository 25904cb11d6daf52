"""
backend/app/pbc/routes.py

PBC Routes
- Compile a circuit into a Pauli measurement schedule
"""

from fastapi import APIRouter, status

from app.pbc import schemas
from app.pbc.services import build_response

router = APIRouter(prefix="/pbc", tags=["PBC"])


@router.post(
    "/compile",
    response_model=schemas.CompileResponse,
    status_code=status.HTTP_200_OK,
    summary="Compile Circuit",
    description="Commutes Cliffords to the end and schedules the remaining Pauli measurements.",
)
async def compile_circuit(payload: schemas.CompileRequest) -> schemas.CompileResponse:
    """Parses the circuit text, compiles it and reports step and cycle counts."""
    return build_response(payload)

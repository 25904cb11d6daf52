"""
backend/app/cleaning/routes.py

Cleaning Routes
- Clean a Clifford frame (general or port procedure)
"""

from fastapi import APIRouter, status

from app.cleaning import schemas
from app.cleaning.services import build_response
from app.gf2.symplectic import SymplecticMat

router = APIRouter(prefix="/cleaning", tags=["Cleaning"])


@router.post(
    "/clean",
    response_model=schemas.CleanResponse,
    status_code=status.HTTP_200_OK,
    summary="Clean Clifford Frame",
    description="Emits pi/4 rotation axes making the frame trivial on the first w qubits.",
)
async def clean_frame(payload: schemas.CleanRequest) -> schemas.CleanResponse:
    """Runs the requested cleaning procedure on the submitted frame."""
    frame = SymplecticMat.from_lists(payload.rows)
    return build_response(frame, payload.w, payload.mode, verify=payload.verify)

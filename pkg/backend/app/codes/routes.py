"""
backend/app/codes/routes.py

Code Routes
- List the verified code family table
- Retrieve the block costs of one family member
"""

from fastapi import APIRouter, Query, status

from app.codes import schemas
from app.codes.services import CodeService
from app.core.schemas import ListResponse

router = APIRouter(prefix="/codes", tags=["Codes"])


@router.get(
    "",
    response_model=ListResponse[schemas.CodeRead],
    status_code=status.HTTP_200_OK,
    summary="List Code Family",
    description="Builds every family member and reports k, CSS/weight checks and block costs.",
)
async def list_codes(
    distance: bool = Query(False, description="Also run the distance checks (slow)"),
    budget: int = Query(50, ge=1, le=10_000, description="Randomized search rounds"),
    seed: int = Query(0, description="Seed for randomized search"),
) -> ListResponse[schemas.CodeRead]:
    """Returns the verified family table."""
    rows = CodeService().verify_table(distance=distance, budget=budget, seed=seed)
    return ListResponse[schemas.CodeRead](total_count=len(rows), items=rows)


@router.get(
    "/{m}/costs",
    response_model=schemas.BlockCostsRead,
    status_code=status.HTTP_200_OK,
    summary="Block Costs",
    description="Physical qubits per processing block for family member m.",
)
async def block_costs(m: int) -> schemas.BlockCostsRead:
    """Returns stored block costs with n_pb checked against its components."""
    return CodeService().costs_read(m)

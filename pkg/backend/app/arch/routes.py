"""
backend/app/arch/routes.py

Architecture Routes
- Logical error-rate table from the fitted ansatz
- Magic engine bookkeeping per regime
"""

from fastapi import APIRouter, Query, status

from app.arch import schemas
from app.arch.services import error_rate_table, get_fit, magic_engine_read, magic_engine_spec
from app.core.schemas import ListResponse

router = APIRouter(prefix="/arch", tags=["Architecture"])


@router.get(
    "/error-rates",
    response_model=ListResponse[schemas.ErrorRateRead],
    status_code=status.HTTP_200_OK,
    summary="Logical Error Rates",
    description="Rates per logical qubit and logical cycle per family member at p=1e-3 and 1e-4.",
)
async def list_error_rates(
    experiment: schemas.Experiment = Query(schemas.Experiment.LOGICAL_MEASUREMENT),
    sensitivity: bool = Query(False, description="Include 95% interval endpoints"),
) -> ListResponse[schemas.ErrorRateRead]:
    """Evaluates the ansatz over the family table."""
    rows = error_rate_table(get_fit(experiment), sensitivity=sensitivity)
    return ListResponse[schemas.ErrorRateRead](total_count=len(rows), items=rows)


@router.get(
    "/magic-engines/{regime}",
    response_model=schemas.MagicEngineRead,
    status_code=status.HTTP_200_OK,
    summary="Magic Engine",
    description="Qubit count, rejection rate and output fidelity of the magic engine.",
)
async def get_magic_engine(regime: schemas.Regime) -> schemas.MagicEngineRead:
    """Returns the regime's magic engine with its recomputed qubit total."""
    return magic_engine_read(magic_engine_spec(regime))

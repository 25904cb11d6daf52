"""
backend/app/estimators/routes.py

Estimator Routes
- Fermi-Hubbard per-shot estimate
- RSA estimate at a fixed parameter point, subroutine accounting and optimiser
"""

from fastapi import APIRouter, status

from app.arch.schemas import HardwareProfile
from app.estimators import schemas
from app.estimators.fermi_hubbard import fh_estimate
from app.estimators.optimizer import rsa_optimize
from app.estimators.rsa import rsa_estimate, rsa_subroutine_costs
from app.estimators.services import application_hardware

router = APIRouter(prefix="/estimates", tags=["Estimates"])


def _rsa_params(payload: schemas.RSARequest) -> schemas.RSAParams:
    """Loop 1 window is half the regime code's logical qubit count."""
    hardware = application_hardware(schemas.Application.RSA, payload.regime, payload.t_c)
    return schemas.RSAParams(
        w1=hardware.code.k // 2,
        **payload.model_dump(exclude={"regime", "t_c"}),
    )


@router.post(
    "/fermi-hubbard",
    response_model=schemas.ResourceEstimate,
    status_code=status.HTTP_200_OK,
    summary="Fermi-Hubbard Estimate",
    description="Physical qubits and runtime of one phase-estimation shot.",
)
async def estimate_fermi_hubbard(payload: schemas.FHRequest) -> schemas.ResourceEstimate:
    params = schemas.FHParams(**payload.model_dump(exclude={"regime", "t_c"}))
    return fh_estimate(params, payload.regime, payload.t_c)


@router.post(
    "/rsa",
    response_model=schemas.ResourceEstimate,
    status_code=status.HTTP_200_OK,
    summary="RSA Estimate",
    description="Qubits, cycles and expected runtime of one factoring parameter point.",
)
async def estimate_rsa(payload: schemas.RSARequest) -> schemas.ResourceEstimate:
    """Infeasible points are reported with feasible=false and a reason."""
    return rsa_estimate(_rsa_params(payload), payload.regime, payload.t_c)


@router.post(
    "/rsa/subroutines",
    response_model=schemas.SubroutineReport,
    status_code=status.HTTP_200_OK,
    summary="RSA Subroutine Costs",
    description="Per-prime T count and logical cycles of each subroutine.",
)
async def rsa_subroutines(payload: schemas.RSARequest) -> schemas.SubroutineReport:
    return rsa_subroutine_costs(_rsa_params(payload))


@router.post(
    "/rsa/optimize",
    response_model=schemas.OptimizationResult,
    status_code=status.HTTP_200_OK,
    summary="Optimise RSA Parameters",
    description="Grid search for the fewest qubits under a runtime cap, or the reverse.",
)
async def optimize_rsa(payload: schemas.OptimizeRequest) -> schemas.OptimizationResult:
    profile = HardwareProfile(p=payload.p, t_c=payload.t_c)
    return rsa_optimize(
        profile,
        payload.objective,
        cap=payload.cap,
        n_bits=payload.n_bits,
        m=payload.m,
        strategy=payload.strategy,
    )

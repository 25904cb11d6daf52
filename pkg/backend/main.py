"""
main.py

Application entrypoint for the QLDPC Cost Model API.
- Initializes structured logging
- Sets up the FastAPI application and CORS
- Maps cost-model errors to 422 responses
- Registers one router per domain
"""

import logging

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.arch.routes import router as arch_router
from app.cleaning.routes import router as cleaning_router
from app.codes.routes import router as codes_router
from app.core.config import settings
from app.core.exceptions import CostModelError
from app.core.logging import init_logging
from app.core.schemas import ErrorResponse
from app.estimators.routes import router as estimators_router
from app.pbc.routes import router as pbc_router

logger = logging.getLogger(__name__)

# -----------------------------
# FastAPI App Initialization
# -----------------------------
app = FastAPI(
    title="QLDPC Cost Model API",
    description="Code, compilation and resource-estimate tables for a QLDPC architecture.",
    version="0.1.0",
)

init_logging()


# -----------------------------
# Exception Handlers
# -----------------------------
@app.exception_handler(CostModelError)
async def cost_model_error_handler(request: Request, exc: CostModelError) -> JSONResponse:
    logger.warning(f"[API] {request.method} {request.url.path}: {type(exc).__name__}: {exc}")
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content=ErrorResponse(detail=exc.message).model_dump(),
    )


# -----------------------------
# CORSMiddleware Configuration
# -----------------------------
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# -----------------------------
# API Router Registration
# -----------------------------
app.include_router(codes_router)
app.include_router(cleaning_router)
app.include_router(pbc_router)
app.include_router(arch_router)
app.include_router(estimators_router)


# -----------------------------
# Root Endpoint
# -----------------------------
@app.get("/")
async def home() -> dict[str, str]:
    return {"name": settings.APP_NAME, "docs": "/docs"}

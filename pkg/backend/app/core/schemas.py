"""
backend/app/core/schemas.py

Core Schemas

Pydantic models shared across domains:
- Generic list response wrapper.
- Error response body returned by the exception handler.
"""

from typing import Generic, TypeVar

from pydantic import BaseModel, Field

# Define a type variable for the items in the list response
T = TypeVar("T")


class ListResponse(BaseModel, Generic[T]):
    """
    Generic schema for table-like responses.
    """

    total_count: int = Field(..., description="Number of rows returned")
    items: list[T] = Field(..., description="Rows")


class ErrorResponse(BaseModel):
    """
    Body returned for rejected inputs.
    """

    detail: str = Field(..., description="Diagnostic message")

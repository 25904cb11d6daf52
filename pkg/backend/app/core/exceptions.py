"""
backend/app/core/exceptions.py

Domain Exceptions

Every error raised by the cost model derives from CostModelError so the
HTTP layer and the CLI can translate them uniformly:
- HTTP: 422 with {"detail": message}
- CLI: exit status 1 with the message on stderr
"""

from typing import Any


class CostModelError(Exception):
    """Base class for all cost-model errors."""

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        return self.message


class DimensionMismatchError(CostModelError):
    """Operands live on different qubit counts."""


class NotSymplecticError(CostModelError):
    """A matrix expected to be symplectic is not."""


class PortFormError(CostModelError):
    """Matrix is not of the control-only port form; `row` names the violation."""


class CircuitError(CostModelError):
    """Malformed circuit: bad gate, unassigned qubit, illegal join."""


class CodeConstructionError(CostModelError):
    """Code construction produced an invalid CSS pair."""


class DistanceBudgetError(CostModelError):
    """Exhaustive distance enumeration refused because the kernel is too large."""


class ParameterError(CostModelError):
    """Algorithm or hardware parameter outside its admissible range."""


class ConfigError(CostModelError):
    """Unreadable or invalid configuration; carries `key` and/or `path`."""

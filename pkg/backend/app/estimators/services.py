"""
backend/app/estimators/services.py

Shared Estimator Services

Hardware context common to both applications:
- code and magic engine chosen for an application in a regime
- logical error rate, logical cycle length and the magic-engine availability factor
- shot success probability
"""

import math
from dataclasses import dataclass

from app.arch.schemas import Experiment, Regime
from app.arch.services import (
    MagicEngineSpec,
    alpha,
    get_fit,
    logical_error_rate,
    magic_engine_spec,
    regime_code,
)
from app.core.exceptions import ParameterError
from app.data.loader import CodeRow, ComponentTable, load_components
from app.estimators.schemas import Application


@dataclass(frozen=True, slots=True)
class ApplicationHardware:
    """Everything an estimate needs to know about the machine."""

    application: Application
    regime: Regime
    t_c: float
    code: CodeRow
    engine: MagicEngineSpec
    p_L: float

    @property
    def d(self) -> int:
        return self.code.d

    @property
    def d_t(self) -> int:
        """Code cycles per logical cycle, d + 2."""
        return self.code.d + 2

    @property
    def logical_cycle_time(self) -> float:
        return self.d_t * self.t_c

    @property
    def availability(self) -> float:
        """2/3 of cycles wait on a T state: (2/3)/(1 - p_r) + 1/3."""
        return (2 / 3) * alpha(self.engine.p_r) + 1 / 3


def application_hardware(
    application: Application,
    regime: Regime,
    t_c: float,
    table: ComponentTable | None = None,
) -> ApplicationHardware:
    """
    Resolves the code (by the application's regime mapping), magic engine and
    logical error rate for one regime.

    Raises:
        ParameterError: non-positive t_c.
    """
    if t_c <= 0:
        raise ParameterError(f"Code cycle time must be positive, got {t_c}")
    table = table or load_components()
    regime = Regime(regime)
    code = regime_code(application.value, regime, table)
    engine = magic_engine_spec(regime, table)
    fit = get_fit(Experiment.LOGICAL_MEASUREMENT, table)
    p_L = logical_error_rate(fit, regime.p, code.k, code.d)
    return ApplicationHardware(application, regime, t_c, code, engine, p_L)


def shot_success(
    logical_qubits: float, logical_cycles: float, t_count: float, p_L: float, p_T: float
) -> float:
    """(1 - p_L)^(N T) (1 - p_T)^tau, evaluated in log space."""
    log_success = logical_qubits * logical_cycles * math.log1p(-p_L) + t_count * math.log1p(-p_T)
    return math.exp(log_success)

"""
backend/app/cli/main.py

Command-Line Entry Point (`qldpc-cost`)

Click command group over every cost-model module:
- code family table, frame cleaning and PBC compilation
- error-rate and magic-engine tables
- Fermi-Hubbard and RSA estimates, optimiser, heatmap and results tables
- subroutine accounting and the parallelisation spacetime sweep

Precedence for every value: command flag > YAML run config > defaults.
Exit status: 0 on success, 1 on a cost-model or I/O error, 2 when --strict
is set and a result is infeasible.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, TypeVar

import click
import numpy as np

from app.arch.schemas import Experiment, HardwareProfile, Regime
from app.arch.services import error_rate_table, get_fit, magic_engine_read, magic_engine_spec
from app.cleaning.schemas import CleaningMode
from app.cleaning.services import build_response as build_clean_response
from app.cli.io import FORMATS, read_matrix, render_csv, render_json, write_output
from app.codes.services import DEFAULT_RANDOMIZED_BUDGET, CodeService
from app.core.config import RunConfig, load_run_config, settings
from app.core.exceptions import CostModelError, DimensionMismatchError, ParameterError
from app.core.logging import init_logging
from app.data.loader import ComponentTable, load_components
from app.estimators.fermi_hubbard import DEFAULT_LATTICES, fh_estimate, fh_table
from app.estimators.optimizer import heatmap, results_table, rsa_optimize
from app.estimators.rsa import rsa_estimate, rsa_subroutine_costs, spacetime_sweep
from app.estimators.schemas import (
    Application,
    FHParams,
    Objective,
    RhoStrategy,
    RSAParams,
)
from app.estimators.services import application_hardware
from app.pbc.parser import read_circuit
from app.pbc.services import compile_circuit, schedule_response

logger = logging.getLogger(__name__)

T = TypeVar("T")

EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
FH_TABLE_COLUMNS = (
    "L",
    "regime",
    "t_c",
    "d",
    "logical_qubits",
    "physical_qubits",
    "physical_qubits_human",
    "logical_cycles",
    "shot_runtime",
    "total_runtime_human",
    "p_L",
    "failure_budget",
)


# ---------------------------------------------------
# Context
# ---------------------------------------------------
@dataclass
class CliContext:
    """Resolved global options shared by every subcommand."""

    config: RunConfig
    output: str | None
    fmt: str | None
    seed: int
    workers: int
    strict: bool

    @property
    def table(self) -> ComponentTable:
        return load_components(self.config.components_file)

    @property
    def regime(self) -> Regime:
        if self.config.regime is not None:
            return Regime(self.config.regime)
        return Regime.from_p(self.config.hardware.p)

    def emit(self, data: Any, default_format: str, columns: Sequence[str] | None = None) -> None:
        """Renders a model (JSON) or a list of rows (CSV/JSON) to --output or stdout."""
        fmt = self.fmt or default_format
        if fmt == "csv":
            rows = data if isinstance(data, list) else [data]
            text = render_csv(rows, columns)
        else:
            text = render_json(data)
        if self.output is None:
            click.echo(text, nl=False)
        else:
            write_output(text, self.output)

    def finish(self, feasible: bool, reason: str | None = None) -> None:
        if self.strict and not feasible:
            click.echo(f"Infeasible: {reason or 'no feasible result'}", err=True)
            raise click.exceptions.Exit(EXIT_INFEASIBLE)


def _pick(flag: T | None, configured: T | None, default: T) -> T:
    if flag is not None:
        return flag
    if configured is not None:
        return configured
    return default


class CostModelGroup(click.Group):
    """Maps cost-model and I/O errors to exit status 1 with a one-line diagnostic."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except CostModelError as e:
            logger.error(f"[CLI] {type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            raise click.exceptions.Exit(EXIT_ERROR)
        except OSError as e:
            logger.error(f"[CLI] I/O failure: {e}")
            click.echo(f"Error: {e}", err=True)
            raise click.exceptions.Exit(EXIT_ERROR)


# ---------------------------------------------------
# Group
# ---------------------------------------------------
@click.group(cls=CostModelGroup)
@click.option("--config", "config_path", type=click.Path(), help="YAML run configuration")
@click.option("--output", "-o", type=click.Path(), help="Write the artifact here, not stdout")
@click.option("--format", "fmt", type=click.Choice(FORMATS), help="Artifact format")
@click.option("--seed", type=int, help="Seed for randomized routines")
@click.option("--workers", type=click.IntRange(min=1), help="Worker processes for sweeps")
@click.option("--strict", is_flag=True, help="Exit 2 when a result is infeasible")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: str | None,
    output: str | None,
    fmt: str | None,
    seed: int | None,
    workers: int | None,
    strict: bool,
    log_level: str | None,
) -> None:
    """QLDPC architecture cost model."""
    init_logging(level=log_level or settings.LOG_LEVEL, to_file=False)
    config = load_run_config(config_path)
    ctx.obj = CliContext(
        config=config,
        output=_pick(output, config.output.path, None),
        fmt=_pick(fmt, config.output.format, None),
        seed=_pick(seed, config.seed, settings.DEFAULT_SEED),
        workers=_pick(workers, config.workers, settings.WORKERS),
        strict=strict,
    )
    logger.debug(f"[CLI] {ctx.invoked_subcommand} with {ctx.obj}")


pass_cli = click.make_pass_decorator(CliContext)


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ParameterError(f"Expected comma-separated numbers, got '{text}'")


def _range(text: str) -> tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2 or not 0 < values[0] <= values[1]:
        raise ParameterError(f"Expected 'low,high' with 0 < low <= high, got '{text}'")
    return values[0], values[1]


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ParameterError(f"Expected comma-separated integers, got '{text}'")


# ---------------------------------------------------
# Codes, Cleaning, Compilation
# ---------------------------------------------------
@cli.command("codes")
@click.option("--distance/--no-distance", default=True, help="Run the distance checks")
@click.option("--budget", type=int, default=DEFAULT_RANDOMIZED_BUDGET, help="Randomized rounds")
@pass_cli
def codes_command(obj: CliContext, distance: bool, budget: int) -> None:
    """Verified code family table."""
    rows = CodeService(obj.table).verify_table(
        distance=distance, budget=budget, seed=obj.seed, workers=obj.workers
    )
    columns = ("m", "n", "k", "d_claimed", "d_verified_or_bound", "n_cb", "n_g", "n_b", "n_pb")
    obj.emit(rows, "csv", columns if obj.fmt != "json" else None)


@cli.command("clean")
@click.option("--matrix", "matrix_path", type=click.Path(), required=True)
@click.option("--w", "w", type=click.IntRange(min=1), required=True, help="Prefix width")
@click.option("--n", "n", type=int, help="Expected qubit count")
@click.option("--mode", type=click.Choice([m.value for m in CleaningMode]), default="general")
@click.option("--verify", is_flag=True, help="Replay rotations and check the residual")
@pass_cli
def clean_command(
    obj: CliContext, matrix_path: str, w: int, n: int | None, mode: str, verify: bool
) -> None:
    """Clean a Clifford frame on its first w qubits."""
    frame = read_matrix(matrix_path)
    if n is not None and frame.n != n:
        raise DimensionMismatchError(f"Matrix acts on {frame.n} qubits, expected --n {n}")
    obj.emit(build_clean_response(frame, w, CleaningMode(mode), verify=verify), "json")


@cli.command("compile")
@click.option("--circuit", "circuit_path", type=click.Path(), required=True)
@click.option("--d-t", "d_t", type=click.IntRange(min=1), help="Code cycles per logical cycle")
@click.option("--p-r", "p_r", type=click.FloatRange(0, 1, max_open=True), default=0.0)
@pass_cli
def compile_command(obj: CliContext, circuit_path: str, d_t: int | None, p_r: float) -> None:
    """Compile a circuit file to a Pauli measurement schedule."""
    circuit = read_circuit(circuit_path)
    schedule = compile_circuit(circuit, d_t)
    obj.emit(schedule_response(circuit, schedule, p_r), "json")


# ---------------------------------------------------
# Architecture Tables
# ---------------------------------------------------
@cli.command("error-rates")
@click.option(
    "--experiment",
    type=click.Choice([e.value for e in Experiment]),
    default=Experiment.LOGICAL_MEASUREMENT.value,
)
@click.option("--sensitivity", is_flag=True, help="Add 95% interval endpoints")
@pass_cli
def error_rates_command(obj: CliContext, experiment: str, sensitivity: bool) -> None:
    """Logical error rate per family member at p = 1e-3 and 1e-4."""
    fit = get_fit(Experiment(experiment), obj.table)
    rows = error_rate_table(fit, codes=obj.table.codes, sensitivity=sensitivity)
    obj.emit(rows, "csv")


@cli.command("magic-engines")
@pass_cli
def magic_engines_command(obj: CliContext) -> None:
    """Magic engine bookkeeping for both regimes."""
    rows = [magic_engine_read(magic_engine_spec(regime, obj.table)) for regime in Regime]
    obj.emit(rows, "csv")


# ---------------------------------------------------
# Fermi-Hubbard
# ---------------------------------------------------
@cli.command("estimate-fh")
@click.option("--L", "L", type=int, help="Even lattice side")
@click.option("--u", "u", type=click.Choice(["4", "8"]), help="Coupling strength")
@click.option("--W", "W", type=float, help="Trotter error bound")
@click.option("--x", "x", type=float, help="Error budget split")
@click.option("--t-override", "t_override", type=float, help="Logical cycle count")
@click.option("--regime", type=click.Choice([r.value for r in Regime]))
@click.option("--tc", "t_c", type=float, help="Code cycle time in seconds")
@pass_cli
def estimate_fh_command(
    obj: CliContext,
    L: int | None,
    u: str | None,
    W: float | None,
    x: float | None,
    t_override: float | None,
    regime: str | None,
    t_c: float | None,
) -> None:
    """Per-shot Fermi-Hubbard estimate."""
    section = obj.config.fh
    explicit = "t_override" in section.model_fields_set
    if t_override is None and W is None and (section.W is None or explicit):
        t_override = section.t_override
    params = FHParams(
        L=_pick(L, section.L, 16),
        u=int(_pick(u, str(section.u), "4")),
        W=_pick(W, section.W, None),
        x=_pick(x, section.x, None),
        t_override=t_override,
    )
    estimate = fh_estimate(
        params,
        Regime(regime) if regime else obj.regime,
        _pick(t_c, None, obj.config.hardware.t_c),
        obj.table,
    )
    obj.emit(estimate, "json")
    obj.finish(estimate.feasible, estimate.reason)


@cli.command("fh-table")
@click.option("--ls", default=",".join(str(L) for L in DEFAULT_LATTICES), help="Lattice sides")
@click.option("--tcs", default="1e-6,1e-3", help="Code cycle times in seconds")
@click.option("--t-override", "t_override", type=float, default=8.0e6)
@pass_cli
def fh_table_command(obj: CliContext, ls: str, tcs: str, t_override: float) -> None:
    """Fermi-Hubbard results table."""
    rows = fh_table(_int_list(ls), tuple(Regime), _float_list(tcs), t_override, obj.table)
    records = [
        {"L": row.params["L"], "regime": row.regime.value, **row.model_dump(mode="json")}
        for row in rows
    ]
    obj.emit(records, "csv", FH_TABLE_COLUMNS if obj.fmt != "json" else None)


# ---------------------------------------------------
# RSA
# ---------------------------------------------------
def _rsa_point(
    obj: CliContext, regime: Regime, t_c: float, flags: dict[str, int | None]
) -> RSAParams | None:
    """The fixed parameter point, or None when any of s, f, ell, w3, w4 is unset."""
    section = obj.config.rsa
    values = {
        name: _pick(flags.get(name), getattr(section, name), None)
        for name in ("s", "f", "ell", "w3", "w4", "rho", "m")
    }
    if any(values[name] is None for name in ("s", "f", "ell", "w3", "w4")):
        return None
    hardware = application_hardware(Application.RSA, regime, t_c, obj.table)
    return RSAParams(
        n_bits=section.n_bits,
        s=values["s"],
        f=values["f"],
        ell=values["ell"],
        w1=hardware.code.k // 2,
        w3=values["w3"],
        w4=values["w4"],
        rho=values["rho"] or 1,
        m=values["m"],
    )


def rsa_options(func: Any) -> Any:
    for name in ("m", "rho", "w4", "w3", "ell", "f", "s"):
        func = click.option(f"--{name}", name, type=int)(func)
    func = click.option("--tc", "t_c", type=float, help="Code cycle time in seconds")(func)
    func = click.option("--p", "p", type=float, help="Physical error rate")(func)
    return func


def _profile(obj: CliContext, p: float | None, t_c: float | None) -> HardwareProfile:
    hardware = obj.config.hardware
    return HardwareProfile(p=_pick(p, None, hardware.p), t_c=_pick(t_c, None, hardware.t_c))


def _regime(obj: CliContext, p: float | None) -> Regime:
    return Regime.from_p(p) if p is not None else obj.regime


@cli.command("estimate-rsa")
@rsa_options
@click.option("--objective", type=click.Choice([o.value for o in Objective]))
@click.option("--cap", type=float, help="Runtime cap (s) or qubit cap for min-runtime")
@click.option("--rho-strategy", type=click.Choice([r.value for r in RhoStrategy]))
@pass_cli
def estimate_rsa_command(
    obj: CliContext,
    p: float | None,
    t_c: float | None,
    objective: str | None,
    cap: float | None,
    rho_strategy: str | None,
    **flags: int | None,
) -> None:
    """RSA estimate at a fixed point, or the optimiser when the point is incomplete."""
    profile = _profile(obj, p, t_c)
    regime = _regime(obj, p)
    point = _rsa_point(obj, regime, profile.t_c, flags)
    if point is not None:
        estimate = rsa_estimate(point, regime, profile.t_c, obj.table)
        obj.emit(estimate, "json")
        obj.finish(estimate.feasible, estimate.reason)
        return

    section = obj.config.rsa
    goal = Objective(_pick(objective, section.objective, Objective.MIN_QUBITS.value))
    configured_cap = section.runtime_cap if goal is Objective.MIN_QUBITS else section.qubit_cap
    result = rsa_optimize(
        HardwareProfile(p=regime.p, t_c=profile.t_c),
        goal,
        cap=_pick(cap, configured_cap, None),
        n_bits=section.n_bits,
        m=_pick(flags.get("m"), section.m, None),
        strategy=RhoStrategy(_pick(rho_strategy, section.rho_strategy, "geometric")),
        workers=obj.workers,
        table=obj.table,
    )
    obj.emit(result, "json")
    obj.finish(result.feasible, result.reason)


@cli.command("subroutines")
@rsa_options
@pass_cli
def subroutines_command(
    obj: CliContext, p: float | None, t_c: float | None, **flags: int | None
) -> None:
    """Per-prime subroutine accounting at a fixed parameter point."""
    profile = _profile(obj, p, t_c)
    point = _rsa_point(obj, _regime(obj, p), profile.t_c, flags)
    if point is None:
        raise ParameterError("subroutines needs s, f, ell, w3 and w4")
    report = rsa_subroutine_costs(point)
    if (obj.fmt or "csv") == "csv":
        obj.emit(report.rows, "csv")
    else:
        obj.emit(report, "json")


@cli.command("spacetime")
@rsa_options
@click.option("--rhos", default="1,10,100,1000", help="Parallelisation factors")
@pass_cli
def spacetime_command(
    obj: CliContext, p: float | None, t_c: float | None, rhos: str, **flags: int | None
) -> None:
    """Logical spacetime against parallelisation factor."""
    profile = _profile(obj, p, t_c)
    point = _rsa_point(obj, _regime(obj, p), profile.t_c, flags)
    if point is None:
        raise ParameterError("spacetime needs s, f, ell, w3 and w4")
    obj.emit(spacetime_sweep(point, _int_list(rhos)), "csv")


@cli.command("heatmap")
@click.option("--p", "p", type=float, help="Physical error rate")
@click.option("--tc-range", default="1e-6,1e-3", help="Smallest,largest code cycle time")
@click.option("--qubit-range", default="5e4,1e7", help="Smallest,largest qubit budget")
@click.option("--points", type=click.IntRange(min=2), default=10, help="Grid points per axis")
@pass_cli
def heatmap_command(
    obj: CliContext, p: float | None, tc_range: str, qubit_range: str, points: int
) -> None:
    """Optimal expected runtime over (t_c, qubit budget); log-spaced axes."""
    tc_low, tc_high = _range(tc_range)
    q_low, q_high = _range(qubit_range)
    t_cs = [float(v) for v in np.geomspace(tc_low, tc_high, points)]
    caps = [int(round(v)) for v in np.geomspace(q_low, q_high, points)]
    cells = heatmap(
        _pick(p, None, obj.config.hardware.p), t_cs, caps, workers=obj.workers, table=obj.table
    )
    obj.emit(cells, "csv")


@cli.command("rsa-table")
@click.option("--tcs", default="1e-6,1e-5,1e-4,1e-3", help="Code cycle times in seconds")
@pass_cli
def rsa_table_command(obj: CliContext, tcs: str) -> None:
    """Minimum physical qubits per (t_c, p, runtime cap)."""
    rows = results_table(_float_list(tcs), workers=obj.workers, table=obj.table)
    obj.emit(rows, "csv")
    obj.finish(any(row.feasible for row in rows), "no cell of the table is feasible")


if __name__ == "__main__":
    cli()

"""Nonnegativity-preserving time stepping.

Each step is split in two stages. The reaction terms (and bacteria
convection) advance explicitly in production-destruction form with a step
no larger than ``safety / D_max``; then every species diffuses implicitly by
backward Euler with coefficients sampled at the new time. Both stages map
nonnegative states to nonnegative states. A step whose output still dips
below ``-negativity_tol`` or whose linear solve fails is retried with half the
step size.
"""

import logging
from collections.abc import Callable, Sequence

import numpy as np
from scipy import sparse

from epidiff.config import SimulationConfig
from epidiff.diagnostics.functionals import RecordBuilder
from epidiff.discretization.grid import Field, State
from epidiff.discretization.operators import convection_split, diffusion_matrix, integrate
from epidiff.errors import ConfigurationError, DomainError, NumericalAbort, SolverError, StepFailure
from epidiff.model.parameters import Parameters
from epidiff.model.reaction import infection_rate, production_destruction
from epidiff.model.result import DiagnosticsRecord, RunResult, StepReport
from epidiff.settings import settings
from epidiff.solver.linear import solve_implicit
from epidiff.solver.steady import attractor_target, steady_problem_for
from epidiff.types import CoefficientKind, FloatArray

logger = logging.getLogger(__name__)

Observer = Callable[[int, float, State, DiagnosticsRecord], None]

SNAP_TOLERANCE = 1e-12


def _reaction_split(
    Z: State,
    b_influx: FloatArray,
    p: Parameters,
) -> tuple[list[FloatArray], list[FloatArray]]:
    S, I, R, B = Z.arrays()  # noqa: E741
    split = production_destruction(S, I, R, B, b_influx, p)
    production = [np.asarray(P, dtype=np.float64) for P in split.production]
    destruction = [np.broadcast_to(np.asarray(D, dtype=np.float64), S.shape) for D in split.destruction]
    if p.has_convection:
        convected, rate = convection_split(Z.B, p.velocity)
        production[3] = production[3] + convected
        destruction[3] = destruction[3] + rate
    return production, destruction


def positivity_dt(Z: State, p: Parameters, b_influx: Field, dt_max: float, safety: float) -> float:
    """Largest step keeping the explicit reaction update nonnegative.

    Returns ``min(dt_max, safety / D_max)`` where D_max is the largest
    destruction rate over species and cells, convection included.

    Raises:
        ConfigurationError: If the resulting step is not positive and finite.
    """
    _, destruction = _reaction_split(Z, b_influx.values, p)
    d_max = max(float(np.max(D)) for D in destruction)
    dt = dt_max if d_max <= 0 else min(dt_max, safety / d_max)
    if not np.isfinite(dt) or dt <= 0:
        msg = f"positivity step limit is {dt}; check dt_max and positivity_safety"
        raise ConfigurationError(msg)
    return dt


class DiffusionOperators:
    """Per-species diffusion matrices, cached when the coefficient does not vary in time."""

    def __init__(self, cfg: SimulationConfig) -> None:
        self._cfg = cfg
        self._cache: dict[int, sparse.csr_array] = {}
        self._identity = sparse.eye_array(cfg.grid.size, format="csr")

    def laplacian(self, species: int, t: float) -> sparse.csr_array:
        sampler = self._cfg.diffusion[species]
        if sampler.kind is CoefficientKind.SPACE_TIME_VARYING:
            return diffusion_matrix(self._cfg.grid, sampler.sample(self._cfg.grid, t))
        if species not in self._cache:
            self._cache[species] = diffusion_matrix(self._cfg.grid, sampler.sample(self._cfg.grid, t))
        return self._cache[species]

    def implicit(self, species: int, t: float, dt: float) -> sparse.csr_array:
        """Backward-Euler matrix I - dt * L at time t."""
        return (self._identity - dt * self.laplacian(species, t)).tocsr()


def _advance(
    Z: State,
    t: float,
    dt: float,
    cfg: SimulationConfig,
    operators: DiffusionOperators,
) -> tuple[State, tuple[int, int, int, int], float]:
    grid = cfg.grid
    b_influx = cfg.influx.sample(grid, t)
    production, destruction = _reaction_split(Z, b_influx, cfg.params)
    explicit = [u + dt * (P - D * u) for u, P, D in zip(Z.arrays(), production, destruction, strict=True)]
    if cfg.forcing is not None:
        explicit = [u + dt * f for u, f in zip(explicit, cfg.forcing(grid, t), strict=True)]
    if not all(np.all(np.isfinite(u)) for u in explicit):
        msg = f"non-finite value in the reaction stage from t={t:g} with dt={dt:g}"
        raise NumericalAbort(msg)

    S, I, _, B = Z.arrays()  # noqa: E741
    incidence = dt * integrate(Field(np.asarray(infection_rate(S, I, B, cfg.params)), grid))

    fields: list[Field] = []
    iterations: list[int] = []
    for species, values in enumerate(explicit):
        rhs = Field(values, grid)
        result = solve_implicit(
            operators.implicit(species, t + dt, dt),
            rhs,
            cfg.solver_tol,
            x0=rhs,
            method=cfg.linear_solver,
        )
        fields.append(result.solution)
        iterations.append(result.iterations)
    return State(*fields), (iterations[0], iterations[1], iterations[2], iterations[3]), incidence


def _initial_dt(Z: State, t: float, cfg: SimulationConfig) -> tuple[float, bool]:
    """Step size before any rejection and whether it lands exactly on t_end."""
    if cfg.positivity_limiter:
        b_influx = Field(cfg.influx.sample(cfg.grid, t), cfg.grid)
        dt = positivity_dt(Z, cfg.params, b_influx, cfg.dt_max, cfg.positivity_safety)
    else:
        dt = cfg.dt_max
    remaining = cfg.t_end - t
    if dt >= remaining - SNAP_TOLERANCE * cfg.t_end:
        return remaining, True
    return dt, False


def _clip_undershoot(Z: State, tol: float) -> State:
    """Zero out values in [-tol, 0) left by an accepted step; deeper negatives pass through."""
    lowest = min(Z.minima())
    if lowest >= 0 or lowest < -tol:
        return Z
    return State(*(Field(np.maximum(u, 0.0), Z.grid) for u in Z.arrays()))


def step(
    Z: State,
    t: float,
    cfg: SimulationConfig,
    operators: DiffusionOperators | None = None,
) -> tuple[State, StepReport]:
    """Advance the state by one accepted step starting at time t.

    Raises:
        NumericalAbort: If a non-finite value appears.
        StepFailure: If the step is still rejected after ``cfg.max_halvings`` halvings.
        DomainError: If the state entering the step is below -negativity_tol.
    """
    Z = _clip_undershoot(Z, cfg.negativity_tol)
    operators = operators or DiffusionOperators(cfg)
    dt, lands_on_end = _initial_dt(Z, t, cfg)

    reason = ""
    for halvings in range(cfg.max_halvings + 1):
        try:
            candidate, iterations, incidence = _advance(Z, t, dt, cfg, operators)
        except SolverError as exc:
            reason = str(exc)
        else:
            if not candidate.is_finite():
                msg = f"non-finite value after step from t={t:g} with dt={dt:g}"
                raise NumericalAbort(msg)
            minima = candidate.minima()
            if not cfg.positivity_limiter or min(minima) >= -cfg.negativity_tol:
                t_new = cfg.t_end if lands_on_end and halvings == 0 else t + dt
                logger.debug("t=%.6g dt=%.3e iterations=%s", t_new, dt, iterations)
                report = StepReport(
                    t_new=t_new,
                    dt_used=dt,
                    linear_iterations=iterations,
                    min_values=minima,
                    incidence=incidence,
                    halvings=halvings,
                )
                return candidate, report
            reason = f"minimum {min(minima):.3e} below -{cfg.negativity_tol:g}"
        logger.warning("step from t=%.6g rejected (%s); halving dt=%.3e", t, reason, dt)
        dt *= 0.5

    msg = f"step from t={t:g} rejected after {cfg.max_halvings} halvings: {reason}"
    raise StepFailure(msg)


def _notify(observers: Sequence[Observer], index: int, t: float, Z: State, record: DiagnosticsRecord) -> None:
    for observer in observers:
        try:
            observer(index, t, Z, record)
        except Exception:
            logger.exception("observer %r failed at step %d", observer, index)


def run(
    cfg: SimulationConfig,
    observers: Sequence[Observer] = (),
    cadence: int | None = None,
    *,
    target: State | None = None,
) -> RunResult:
    """Integrate from t = 0 to ``cfg.t_end``.

    Observers are called with (step index, t, state, record) at step 0, every
    ``cadence`` steps and at the final step. When ``target`` is omitted the
    attractor target is solved from the configured limit profiles, if any.
    A step failure or numerical abort ends the run early with status aborted
    and the series recorded so far.
    """
    cadence = settings.cadence if cadence is None else cadence
    if target is None:
        problem = steady_problem_for(cfg)
        if problem is not None:
            target = attractor_target(problem)

    builder = RecordBuilder(cfg.params, cfg.volume, cfg.influx.bound, cfg.initial, target)
    Z = cfg.initial
    t = 0.0
    initial_record = builder(t, Z)
    records: list[DiagnosticsRecord] = []
    reports: list[StepReport] = []
    _notify(observers, 0, t, Z, initial_record)

    logger.info("run started: grid %s, t_end=%g, dt_max=%g", cfg.grid.cells, cfg.t_end, cfg.dt_max)
    operators = DiffusionOperators(cfg)
    index = 0
    while t < cfg.t_end:
        try:
            Z, report = step(Z, t, cfg, operators)
        except (StepFailure, NumericalAbort, DomainError) as exc:
            logger.error("run aborted at t=%.6g after %d steps: %s", t, index, exc)  # noqa: TRY400
            return RunResult.create_aborted(
                message=str(exc),
                initial=cfg.initial,
                final=Z,
                t_final=t,
                initial_record=initial_record,
                records=records,
                reports=reports,
            )
        index += 1
        t = report.t_new
        record = builder(t, Z)
        records.append(record)
        reports.append(report)
        if index % cadence == 0 or t >= cfg.t_end:
            _notify(observers, index, t, Z, record)

    logger.info("run completed: %d steps to t=%g", index, t)
    return RunResult.create_completed(
        initial=cfg.initial,
        final=Z,
        t_final=t,
        initial_record=initial_record,
        records=records,
        reports=reports,
    )

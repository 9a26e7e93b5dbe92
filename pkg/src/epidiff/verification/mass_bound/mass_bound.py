"""L1 mass bounds for the host species, the bacteria and the cumulative incidence."""

import logging
import math
from typing import NamedTuple

import numpy as np

from epidiff.config import SimulationConfig
from epidiff.diagnostics.functionals import (
    bacteria_mass_bound,
    cumulative_incidence_bound,
    host_mass_bound,
    host_mass_trajectory,
)
from epidiff.model.result import CriterionResult, RunResult, VerificationVerdict
from epidiff.solver.stepper import run
from epidiff.types import CoefficientKind
from epidiff.verification.common import fan_out, observed_order, randomized_config, worst

logger = logging.getLogger(__name__)

SUITE = "mass_bound"
RELATIVE_SLACK = 1e-6
TRAJECTORY_TOLERANCE = 1e-3
TEMPORAL_STEPS = (4e-3, 2e-3, 1e-3)
TEMPORAL_HORIZON = 1.0
ORDER_RANGE = (0.8, 1.2)
ERROR_FLOOR = 1e-13


class MassOutcome(NamedTuple):
    host_ratio: float
    bacteria_ratio: float
    incidence_ratio: float
    trajectory_error: float
    completed: bool


def _ratio(measured: float, bound: float) -> float:
    if bound > 0:
        return measured / bound
    return 0.0 if measured <= 0 else math.inf


def mass_outcome(cfg: SimulationConfig, result: RunResult) -> MassOutcome:
    """Compare a finished run against the host, bacteria and incidence bounds.

    The bacteria ratio is NaN with convection; the closed-form trajectory
    error is NaN unless the influx is constant in space and time.
    """
    p = cfg.params
    volume = cfg.volume
    b0 = cfg.influx.bound
    start = result.initial_record
    M0 = sum(start.masses[:3])
    C1 = host_mass_bound(M0, b0, volume, p.d)

    series = result.series
    host = np.array([sum(r.masses[:3]) for r in series])
    host_ratio = _ratio(float(host.max()), C1)

    bacteria_ratio = math.nan
    if not p.has_convection:
        bound = bacteria_mass_bound(start.masses[3], C1, p, volume)
        bacteria_ratio = _ratio(max(r.masses[3] for r in series), bound)

    incidence_ratio = 0.0
    if result.reports:
        cumulative = np.cumsum([r.incidence for r in result.reports])
        bounds = np.array(
            [cumulative_incidence_bound(r.t_new, start.masses[0], b0, volume, p.sigma, C1) for r in result.reports],
        )
        incidence_ratio = max(_ratio(float(c), float(b)) for c, b in zip(cumulative, bounds, strict=True))

    trajectory_error = math.nan
    if has_closed_form(cfg):
        exact = np.array([host_mass_trajectory(r.t, M0, b0, volume, p.d) for r in series])
        scale = np.maximum(np.abs(exact), np.finfo(np.float64).tiny)
        trajectory_error = float(np.max(np.abs(host - exact) / scale))

    return MassOutcome(host_ratio, bacteria_ratio, incidence_ratio, trajectory_error, result.completed)


def has_closed_form(cfg: SimulationConfig) -> bool:
    """Whether the host mass follows M(t) in closed form: the influx is one constant."""
    return cfg.influx.kind is CoefficientKind.CONSTANT and cfg.influx.lower == cfg.influx.upper


def _run_and_check(cfg: SimulationConfig) -> MassOutcome:
    return mass_outcome(cfg, run(cfg))


def closed_form_runs(cfg: SimulationConfig, threads: int = 1) -> list[MassOutcome]:
    """Run ``cfg`` to min(t_end, 1) once per step in ``TEMPORAL_STEPS``."""
    horizon = min(cfg.t_end, TEMPORAL_HORIZON)
    configs = [cfg.model_copy(update={"dt_max": dt, "t_end": horizon}) for dt in TEMPORAL_STEPS]
    return fan_out(_run_and_check, configs, threads)


def _closed_form_criteria(outcomes: list[MassOutcome]) -> list[CriterionResult]:
    errors = [o.trajectory_error for o in outcomes]
    finest = errors[-1]
    criteria = [
        CriterionResult.check(
            "host_mass_closed_form_error",
            finest,
            TRAJECTORY_TOLERANCE,
            passed=finest <= TRAJECTORY_TOLERANCE,
            message=f"relative error against M(t) at dt={TEMPORAL_STEPS[-1]:g}",
        ),
    ]
    low, high = ORDER_RANGE
    if min(errors) <= ERROR_FLOOR:
        criteria.append(
            CriterionResult.inapplicable("host_mass_temporal_order", "host mass starts at b0 |Omega| / d"),
        )
        return criteria
    order = observed_order(TEMPORAL_STEPS, errors)
    criteria.append(
        CriterionResult.check(
            "host_mass_temporal_order",
            order,
            low,
            passed=low <= order <= high,
            message=f"expected order in [{low:g}, {high:g}]",
        ),
    )
    return criteria


def verify_mass_bound(
    cfg: SimulationConfig,
    *,
    seeds: int = 0,
    base_seed: int = 0,
    t_end: float | None = None,
    threads: int = 1,
) -> VerificationVerdict:
    """Check the uniform L1 bounds on ``cfg`` and on ``seeds`` randomized variants.

    Passes iff on every run sup_t of the host mass stays below
    max(M0, b0 |Omega| / d)(1 + 1e-6), the bacteria mass below its Grönwall
    bound and the cumulative incidence below its integrated bound. With a
    constant influx the template is also rerun at each of ``TEMPORAL_STEPS``:
    the host mass must match M(t) to 1e-3 at the finest step and converge at
    first order.
    """
    configs = [cfg] + [randomized_config(cfg, base_seed + k, t_end=t_end) for k in range(seeds)]
    logger.info("mass_bound: checking %d run(s)", len(configs))
    outcomes = fan_out(_run_and_check, configs, threads)

    host = worst([o.host_ratio for o in outcomes])
    incidence = worst([o.incidence_ratio for o in outcomes])
    bacteria_values = [o.bacteria_ratio for o in outcomes if not math.isnan(o.bacteria_ratio)]
    aborted = sum(not o.completed for o in outcomes)
    limit = 1.0 + RELATIVE_SLACK

    criteria = [
        CriterionResult.check("host_mass_sup/bound", host, limit, passed=host <= limit),
        CriterionResult.check("cumulative_incidence/bound", incidence, limit, passed=incidence <= limit),
    ]
    if bacteria_values:
        bacteria = max(bacteria_values)
        criteria.append(CriterionResult.check("bacteria_mass_sup/bound", bacteria, limit, passed=bacteria <= limit))
    else:
        criteria.append(
            CriterionResult.inapplicable("bacteria_mass_sup/bound", "bacteria bound assumes no convection"),
        )
    if has_closed_form(cfg) and cfg.t_end > 0:
        temporal = closed_form_runs(cfg, threads)
        aborted += sum(not o.completed for o in temporal)
        criteria.extend(_closed_form_criteria(temporal))
    criteria.append(CriterionResult.check("aborted_runs", float(aborted), 0.0, passed=aborted == 0))
    return VerificationVerdict.from_criteria(SUITE, criteria, metadata={"runs": len(configs), "seeds": seeds})

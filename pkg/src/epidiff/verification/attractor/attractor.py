"""Convergence to the global attractor (S_inf, 0, 0, 0) under d - g0 > 0."""

import logging
import math
from typing import NamedTuple

import numpy as np

from epidiff.config import SimulationConfig
from epidiff.discretization.operators import field_reduce
from epidiff.model.reaction import attractor_condition
from epidiff.model.result import CriterionResult, DiagnosticsRecord, RunResult, VerificationVerdict
from epidiff.solver.steady import attractor_target, steady_problem_for
from epidiff.solver.stepper import run
from epidiff.types import ReduceKind

logger = logging.getLogger(__name__)

SUITE = "attractor"
DECAY_RATIO = 1e-4
HORIZON_FACTOR = 40.0
ENERGY_FACTOR = 10.0
BACTERIA_RATIO = 1e-3
FIT_FLOOR = 1e-30
ON_TARGET_TOLERANCE = 1e-12
MIN_FIT_POINTS = 3


class DecayFit(NamedTuple):
    rate: float
    points: int


def fit_decay_rate(records: list[DiagnosticsRecord], t_end: float, J0: float) -> DecayFit:
    """Least-squares exponential rate of J over the final half of the run.

    Samples with J at or below ``1e-30 * J0`` are left out so the rounding
    floor does not flatten the fit.
    """
    times = np.array([r.t for r in records])
    values = np.array([r.J for r in records])
    keep = (times >= 0.5 * t_end) & (values > FIT_FLOOR * J0)
    if keep.sum() < MIN_FIT_POINTS:
        return DecayFit(math.nan, int(keep.sum()))
    slope, _ = np.polyfit(times[keep], np.log(values[keep]), 1)
    return DecayFit(-float(slope), int(keep.sum()))


def limit_defect(cfg: SimulationConfig, t: float) -> float:
    """Squared L2 distance of all coefficient samples to their limit profiles at time t."""
    samplers = (*cfg.diffusion, cfg.influx)
    return sum(s.limit_defect(cfg.grid, t) for s in samplers)


def _criteria(cfg: SimulationConfig, result: RunResult, target_energy: float, fit_tol: float) -> list[CriterionResult]:
    margin = attractor_condition(cfg.params).margin
    series = result.series
    start, end = series[0], series[-1]
    J0 = start.J
    on_target_limit = ON_TARGET_TOLERANCE * target_energy
    on_target = J0 <= on_target_limit
    criteria: list[CriterionResult] = []

    if on_target:
        worst = max(r.J for r in series)
        threshold = on_target_limit
        criteria.append(CriterionResult.check("J_sup_on_attractor", worst, threshold, passed=worst <= threshold))
    elif cfg.t_end < HORIZON_FACTOR / margin:
        criteria.append(
            CriterionResult.inapplicable("J_ratio", f"t_end={cfg.t_end:g} is shorter than 40/(d-g0)"),
        )
    else:
        ratio = end.J / J0
        criteria.append(CriterionResult.check("J_ratio", ratio, DECAY_RATIO, passed=ratio <= DECAY_RATIO))

    if not on_target:
        fit = fit_decay_rate(result.records, cfg.t_end, J0)
        required = 0.5 * margin * (1.0 - fit_tol)
        if math.isnan(fit.rate):
            criteria.append(CriterionResult.inapplicable("J_decay_rate", f"only {fit.points} samples above the floor"))
        else:
            criteria.append(CriterionResult.check("J_decay_rate", fit.rate, required, passed=fit.rate >= required))

    b0 = cfg.influx.bound
    energy_bound = ENERGY_FACTOR * (start.Y4 + 2.0 * b0 * cfg.volume / margin)
    energy_sup = max(r.Y4 for r in series)
    criteria.append(CriterionResult.check("Y4_sup", energy_sup, energy_bound, passed=energy_sup <= energy_bound))

    peak = max(r.J4 for r in series)
    if peak > 0:
        ratio = end.J4 / peak
        criteria.append(CriterionResult.check("J4_ratio", ratio, BACTERIA_RATIO, passed=ratio <= BACTERIA_RATIO))

    criteria.append(
        CriterionResult.check(
            "Y4_below_envelope",
            end.Y4,
            end.envelope,
            passed=end.Y4 <= end.envelope,
            informational=True,
        ),
    )
    defect_start, defect_end = limit_defect(cfg, 0.0), limit_defect(cfg, cfg.t_end)
    criteria.append(
        CriterionResult.check(
            "limit_defect",
            defect_end,
            defect_start,
            passed=defect_end <= defect_start,
            informational=True,
        ),
    )
    return criteria


def verify_attractor(cfg: SimulationConfig, *, fit_tol: float = 0.5) -> VerificationVerdict:
    """Run ``cfg`` and check decay of J towards the attractor.

    Inapplicable when d - g0 <= 0 or when d1 or b has no limit profile.
    """
    condition = attractor_condition(cfg.params)
    if not condition.holds:
        message = f"d - g0 = {condition.margin:g} is not positive"
        logger.info("attractor: %s; suite inapplicable", message)
        return VerificationVerdict.create_inapplicable(SUITE, message, metadata={"margin": condition.margin})

    problem = steady_problem_for(cfg)
    if problem is None:
        message = "d1 or b has no limit profile, so S_inf is unknown"
        return VerificationVerdict.create_inapplicable(SUITE, message, metadata={"margin": condition.margin})

    target = attractor_target(problem)
    result = run(cfg, target=target)
    metadata = {"margin": condition.margin, "t_end": cfg.t_end, "steps": len(result.reports)}
    if not result.completed:
        return VerificationVerdict.create_fail(SUITE, f"run aborted: {result.message}", metadata=metadata)

    target_energy = 0.5 * field_reduce(target.S, ReduceKind.L2SQ)
    criteria = _criteria(cfg, result, target_energy, fit_tol)
    return VerificationVerdict.from_criteria(SUITE, criteria, metadata=metadata)

"""Randomized nonnegativity suite."""

import logging
from typing import NamedTuple

from epidiff.config import SimulationConfig
from epidiff.model.result import CriterionResult, VerificationVerdict
from epidiff.settings import settings
from epidiff.solver.stepper import run
from epidiff.verification.common import fan_out, global_minimum, randomized_config

logger = logging.getLogger(__name__)

SUITE = "nonnegativity"


class SeedOutcome(NamedTuple):
    seed: int
    minimum: float
    completed: bool
    message: str | None


def _run_seed(cfg: SimulationConfig, seed: int) -> SeedOutcome:
    result = run(cfg)
    return SeedOutcome(seed, global_minimum(result), result.completed, result.message)


def _run_seed_args(args: tuple[SimulationConfig, int]) -> SeedOutcome:
    return _run_seed(*args)


def verify_nonnegativity(
    cfg: SimulationConfig,
    seeds: int | None = None,
    *,
    base_seed: int = 0,
    t_end: float | None = None,
    threads: int = 1,
    randomize_initial: bool = True,
) -> VerificationVerdict:
    """Run ``seeds`` randomized simulations and check the global minimum.

    Each seed draws fresh rates (and, by default, fresh initial data) on the
    grid of ``cfg``. The suite passes iff no run aborted and the minimum over
    all species, cells and steps is at least ``-cfg.negativity_tol``.
    """
    seeds = settings.nonnegativity_seeds if seeds is None else seeds
    t_end = settings.nonnegativity_t_end if t_end is None else t_end
    jobs = [
        (randomized_config(cfg, base_seed + k, t_end=t_end, randomize_initial=randomize_initial), base_seed + k)
        for k in range(seeds)
    ]
    logger.info("nonnegativity: %d seeded runs to t=%g on %d worker(s)", seeds, t_end, threads)
    outcomes = fan_out(_run_seed_args, jobs, threads)

    minimum = min(o.minimum for o in outcomes)
    aborted = [o for o in outcomes if not o.completed]
    for outcome in aborted:
        logger.warning("nonnegativity: seed %d aborted: %s", outcome.seed, outcome.message)

    criteria = [
        CriterionResult.check(
            "global_minimum",
            minimum,
            -cfg.negativity_tol,
            passed=minimum >= -cfg.negativity_tol,
        ),
        CriterionResult.check("aborted_runs", float(len(aborted)), 0.0, passed=not aborted),
    ]
    return VerificationVerdict.from_criteria(
        SUITE,
        criteria,
        metadata={
            "seeds": seeds,
            "base_seed": base_seed,
            "t_end": t_end,
            "minima": {o.seed: o.minimum for o in outcomes},
        },
    )

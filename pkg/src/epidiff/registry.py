"""Registry of the verification suites and their descriptions."""

import logging
from collections.abc import Callable, Sequence
from importlib import resources
from typing import NamedTuple

from epidiff.config import SimulationConfig
from epidiff.model.result import VerificationSummary, VerificationVerdict
from epidiff.settings import settings
from epidiff.verification import (
    verify_attractor,
    verify_convergence_orders,
    verify_mass_bound,
    verify_nonnegativity,
)
from epidiff.verification.common import SuiteOptions

logger = logging.getLogger(__name__)

SuiteRunner = Callable[[SimulationConfig, SuiteOptions], VerificationVerdict]


class Suite(NamedTuple):
    name: str
    description: str
    run: SuiteRunner


def _description(name: str) -> str:
    return resources.files(f"epidiff.verification.{name}").joinpath("description.txt").read_text(encoding="utf-8")


def _randomized_t_end(options: SuiteOptions) -> float:
    return settings.nonnegativity_t_end if options.t_end is None else options.t_end


def _nonnegativity(cfg: SimulationConfig, options: SuiteOptions) -> VerificationVerdict:
    return verify_nonnegativity(
        cfg,
        options.seeds,
        base_seed=options.base_seed,
        t_end=_randomized_t_end(options),
        threads=options.threads,
    )


def _mass_bound(cfg: SimulationConfig, options: SuiteOptions) -> VerificationVerdict:
    return verify_mass_bound(
        cfg,
        seeds=options.seeds,
        base_seed=options.base_seed,
        t_end=_randomized_t_end(options),
        threads=options.threads,
    )


def _attractor(cfg: SimulationConfig, options: SuiteOptions) -> VerificationVerdict:  # noqa: ARG001
    return verify_attractor(cfg)


def _convergence(cfg: SimulationConfig, options: SuiteOptions) -> VerificationVerdict:  # noqa: ARG001
    return verify_convergence_orders(threads=options.threads)


def create_registry() -> dict[str, Suite]:
    """Set up the suite registry in execution order.

    Returns:
        dict[str, Suite]: suites keyed by name, each with its description text
    """
    runners: dict[str, SuiteRunner] = {
        "nonnegativity": _nonnegativity,
        "mass_bound": _mass_bound,
        "attractor": _attractor,
        "convergence": _convergence,
    }
    return {name: Suite(name, _description(name), runner) for name, runner in runners.items()}


def list_suites() -> dict[str, str]:
    """Suite names mapped to the first line of their description."""
    return {name: suite.description.split("\n")[0].strip() for name, suite in create_registry().items()}


def run_suites(
    cfg: SimulationConfig,
    options: SuiteOptions,
    names: Sequence[str] | None = None,
) -> list[VerificationVerdict]:
    """Run the selected suites (all by default) in registry order."""
    registry = create_registry()
    selected = list(registry) if names is None else [name for name in registry if name in names]
    verdicts = []
    for name in selected:
        logger.info("running suite %s", name)
        verdict = registry[name].run(cfg, options)
        logger.info("suite %s: %s", name, verdict.status.value)
        verdicts.append(verdict)
    summary = VerificationSummary.of(verdicts)
    logger.info(
        "verification: %d passed, %d failed, %d inapplicable of %d",
        summary.passed,
        summary.failed,
        summary.inapplicable,
        summary.total,
    )
    return verdicts

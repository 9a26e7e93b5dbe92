"""Observed convergence orders on manufactured solutions."""

import logging
from collections.abc import Sequence

from epidiff.model.result import CriterionResult, VerificationVerdict
from epidiff.verification.common import fan_out
from epidiff.verification.convergence.manufactured import STUDIES, ConvergenceStudy, StudyKind, run_study

logger = logging.getLogger(__name__)

SUITE = "convergence"
SPATIAL_ORDER = (1.7, 2.3)
TEMPORAL_ORDER = (0.8, 1.2)
EXACT_TOLERANCE = 1e-10


def _criterion(study: ConvergenceStudy) -> CriterionResult:
    if study.kind is StudyKind.EXACT:
        error = max(study.errors)
        return CriterionResult.check(study.name, error, EXACT_TOLERANCE, passed=error <= EXACT_TOLERANCE)
    low, high = SPATIAL_ORDER if study.kind is StudyKind.SPATIAL else TEMPORAL_ORDER
    order = study.order
    return CriterionResult.check(
        f"{study.name}_order",
        order,
        low,
        passed=low <= order <= high,
        message=f"expected order in [{low}, {high}]; errors {', '.join(f'{e:.3e}' for e in study.errors)}",
    )


def verify_convergence_orders(studies: Sequence[str] | None = None, *, threads: int = 1) -> VerificationVerdict:
    """Run the refinement studies and check the fitted orders.

    Spatial studies must show an order in [1.7, 2.3], temporal ones in
    [0.8, 1.2]; the constant manufactured solution must be reproduced to 1e-10.
    """
    names = list(STUDIES) if studies is None else list(studies)
    unknown = [name for name in names if name not in STUDIES]
    if unknown:
        msg = f"unknown convergence studies: {', '.join(unknown)}"
        raise KeyError(msg)

    results = fan_out(run_study, names, threads)
    for study in results:
        logger.info("convergence: %s errors %s", study.name, study.errors)
    criteria = [_criterion(study) for study in results]
    return VerificationVerdict.from_criteria(
        SUITE,
        criteria,
        metadata={study.name: {"sizes": study.sizes, "errors": study.errors} for study in results},
    )

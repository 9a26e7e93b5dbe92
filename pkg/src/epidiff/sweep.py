"""Parameter sweeps across the attractor threshold d - g0 = 0."""

import itertools
import logging
import math
from typing import NamedTuple

from pydantic import ValidationError

from epidiff.config import ConfigDocument, SweepSpec, build_config
from epidiff.errors import ConfigurationError
from epidiff.model.parameters import Parameters
from epidiff.model.reaction import attractor_condition
from epidiff.model.result import SweepClassification, SweepPointResult, SweepResult, SweepSummary
from epidiff.solver.stepper import run
from epidiff.verification.common import fan_out

logger = logging.getLogger(__name__)


class SweepPoint(NamedTuple):
    index: int
    values: dict[str, float]
    document: ConfigDocument
    t_end: float
    threshold: float


def sweep_values(spec: SweepSpec) -> list[dict[str, float]]:
    """Cartesian product of the axes, first axis varying slowest."""
    names = [axis.name for axis in spec.axes]
    return [dict(zip(names, combo, strict=True)) for combo in itertools.product(*(a.values() for a in spec.axes))]


def _failed(point: SweepPoint, margin: float, message: str) -> SweepPointResult:
    logger.warning("sweep point %d %s failed: %s", point.index, point.values, message)
    return SweepPointResult(
        index=point.index,
        values=point.values,
        margin=margin,
        ratio=math.nan,
        classification=SweepClassification.FAILED,
        message=message,
    )


def run_point(point: SweepPoint) -> SweepPointResult:
    """Simulate one grid point and classify it by J(t_end) / J(0)."""
    try:
        params = Parameters.model_validate({**point.document.params.model_dump(), **point.values})
    except ValidationError as exc:
        return _failed(point, math.nan, str(exc))
    margin = attractor_condition(params).margin
    try:
        cfg = build_config(point.document, params=params, t_end=point.t_end)
    except ConfigurationError as exc:
        return _failed(point, margin, str(exc))

    result = run(cfg)
    if not result.completed:
        return _failed(point, margin, result.message or "run aborted")
    J0, J_end = result.initial_record.J, result.series[-1].J
    if math.isnan(J0) or J0 == 0:
        return _failed(point, margin, "attractor distance is unavailable or zero at t = 0")

    ratio = J_end / J0
    classification = SweepClassification.ATTRACTOR if ratio < point.threshold else SweepClassification.PERSISTENT
    logger.info(
        "sweep point %d %s: margin %.3g ratio %.3e -> %s",
        point.index,
        point.values,
        margin,
        ratio,
        classification.value,
    )
    return SweepPointResult(
        index=point.index,
        values=point.values,
        margin=margin,
        ratio=ratio,
        classification=classification,
    )


def run_sweep(doc: ConfigDocument, spec: SweepSpec | None = None, *, threads: int = 1) -> SweepResult:
    """Run every grid point of ``spec`` (default: the document's ``[sweep]`` section).

    Raises:
        ConfigurationError: If no sweep specification is available.
    """
    spec = spec or doc.sweep
    if spec is None:
        msg = "sweep: the configuration has no [sweep] section"
        raise ConfigurationError(msg)

    points = [
        SweepPoint(index, values, doc, spec.t_end, spec.threshold) for index, values in enumerate(sweep_values(spec))
    ]
    logger.info("sweep: %d points on %d worker(s)", len(points), threads)
    results = fan_out(run_point, points, threads)
    return SweepResult(
        axes=[axis.name for axis in spec.axes],
        points=results,
        summary=SweepSummary(
            total=len(results),
            attractor=len([r for r in results if r.classification is SweepClassification.ATTRACTOR]),
            persistent=len([r for r in results if r.classification is SweepClassification.PERSISTENT]),
            failed=len([r for r in results if r.classification is SweepClassification.FAILED]),
        ),
    )

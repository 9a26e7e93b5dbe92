"""Helpers shared by the verification suites: randomized runs and worker fan-out."""

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

import numpy as np
from pydantic import BaseModel

from epidiff.config import SimulationConfig
from epidiff.discretization.grid import State
from epidiff.model.parameters import Parameters
from epidiff.model.result import RunResult

logger = logging.getLogger(__name__)

RATE_RANGE = (0.1, 2.0)
RANDOMIZED_RATES = ("d", "gamma", "sigma", "delta", "xi", "g", "K", "beta1", "beta2")

T = TypeVar("T")
R = TypeVar("R")


class SuiteOptions(BaseModel):
    """Knobs every suite accepts; unused ones are ignored."""

    seeds: int = 20
    base_seed: int = 0
    threads: int = 1
    t_end: float | None = None


def randomized_config(
    template: SimulationConfig,
    seed: int,
    *,
    t_end: float | None = None,
    randomize_initial: bool = True,
) -> SimulationConfig:
    """Draw rates uniformly from [0.1, 2] and initial data from [0, 1) per cell.

    Grid, coefficients, convection and step controls come from the template.
    """
    rng = np.random.default_rng(seed)
    rates = {name: float(rng.uniform(*RATE_RANGE)) for name in RANDOMIZED_RATES}
    params = Parameters.model_validate({**template.params.model_dump(), **rates})
    update: dict[str, object] = {"params": params}
    if randomize_initial:
        arrays = [rng.uniform(0.0, 1.0, template.grid.cells) for _ in range(4)]
        update["initial"] = State.from_arrays(template.grid, arrays)
    if t_end is not None:
        update["t_end"] = t_end
    return template.model_copy(update=update)


def fan_out(fn: Callable[[T], R], items: Sequence[T], threads: int) -> list[R]:
    """Apply ``fn`` to every item, in worker processes when ``threads > 1``.

    Results keep the order of ``items`` regardless of completion order.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def global_minimum(result: RunResult) -> float:
    """Smallest value over all species, cells and recorded time levels."""
    return min(min(record.min_values) for record in result.series)


def worst(values: Sequence[float]) -> float:
    return max(values) if values else math.nan


def observed_order(sizes: Sequence[float], errors: Sequence[float]) -> float:
    """Slope of log(error) against log(size) by least squares."""
    slope, _ = np.polyfit(np.log(np.asarray(sizes)), np.log(np.asarray(errors)), 1)
    return float(slope)

"""Space-time coefficient samplers for diffusion rates and the susceptible influx."""

import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from epidiff.discretization.expression import Expression
from epidiff.discretization.grid import Grid
from epidiff.errors import ConfigurationError
from epidiff.types import CoefficientKind, FloatArray

logger = logging.getLogger(__name__)


class CoefficientSpec(BaseModel):
    """Declarative form of a coefficient as it appears in a run configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    type: Literal["constant", "expression"] = "constant"
    value: float | None = None
    expression: str | None = None
    limit: str | None = None
    lower: float | None = None
    upper: float | None = None

    @model_validator(mode="before")
    @classmethod
    def _accept_bare_number(cls, data: object) -> object:
        if isinstance(data, int | float) and not isinstance(data, bool):
            return {"type": "constant", "value": float(data)}
        if isinstance(data, str):
            return {"type": "expression", "expression": data}
        return data

    @model_validator(mode="after")
    def _check_variant(self) -> "CoefficientSpec":
        if self.type == "constant" and self.value is None:
            msg = "constant coefficients need a value"
            raise ValueError(msg)
        if self.type == "expression" and self.expression is None:
            msg = "expression coefficients need an expression"
            raise ValueError(msg)
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            msg = "lower bound exceeds upper bound"
            raise ValueError(msg)
        return self


class CoefficientSampler:
    """Evaluates a coefficient d(x, t) or b(x, t) on cell centres.

    ``lower`` and ``upper`` are the declared bounds (d0 and D0 for diffusion,
    0 and b0 for the influx). The limit profile, when known, is the pointwise
    large-time limit of the samples.
    """

    def __init__(
        self,
        rule: Expression | float,
        *,
        limit: Expression | float | None = None,
        lower: float | None = None,
        upper: float | None = None,
    ) -> None:
        self.rule = rule
        self.lower = lower
        self.upper = upper
        if limit is None and not (isinstance(rule, Expression) and rule.depends_on_time):
            limit = rule
        if isinstance(limit, Expression) and limit.depends_on_time:
            msg = f"limit profile {limit.source!r} must not depend on t"
            raise ConfigurationError(msg)
        self.limit = limit

    @classmethod
    def constant(cls, value: float) -> "CoefficientSampler":
        return cls(float(value), lower=float(value), upper=float(value))

    @classmethod
    def from_spec(cls, spec: CoefficientSpec) -> "CoefficientSampler":
        if spec.type == "constant":
            value = float(spec.value)  # type: ignore[arg-type]
            lower = value if spec.lower is None else spec.lower
            upper = value if spec.upper is None else spec.upper
            return cls(value, lower=lower, upper=upper)
        rule = Expression(spec.expression)  # type: ignore[arg-type]
        limit = Expression(spec.limit) if spec.limit is not None else None
        return cls(rule, limit=limit, lower=spec.lower, upper=spec.upper)

    @property
    def kind(self) -> CoefficientKind:
        if not isinstance(self.rule, Expression):
            return CoefficientKind.CONSTANT
        if self.rule.depends_on_time:
            return CoefficientKind.SPACE_TIME_VARYING
        if self.rule.depends_on_space:
            return CoefficientKind.SPACE_VARYING
        return CoefficientKind.CONSTANT

    @staticmethod
    def _evaluate(rule: Expression | float, grid: Grid, t: float) -> FloatArray:
        if isinstance(rule, Expression):
            x, y = grid.coordinates()
            return rule(x, y, t)
        return np.full(grid.cells, rule)

    def sample(self, grid: Grid, t: float) -> FloatArray:
        return self._evaluate(self.rule, grid, t)

    def limit_profile(self, grid: Grid) -> FloatArray | None:
        if self.limit is None:
            return None
        return self._evaluate(self.limit, grid, 0.0)

    @property
    def bound(self) -> float:
        """Upper bound used by the mass and energy estimates (b0 for the influx)."""
        if self.upper is None:
            msg = "coefficient has no upper bound; call resolve_bounds first"
            raise ConfigurationError(msg)
        return self.upper

    def resolve_bounds(self, grid: Grid, times: tuple[float, ...], *, name: str, positive: bool) -> None:
        """Check declared bounds on sample points, inferring missing ones.

        Args:
            grid: grid whose cell centres are sampled
            times: sample times, typically 0 and t_end
            name: key path used in error messages
            positive: require a strictly positive lower bound (diffusion rates)

        Raises:
            ConfigurationError: If a sample is non-finite or outside the bounds.
        """
        samples = np.stack([self.sample(grid, t) for t in times])
        if not np.all(np.isfinite(samples)):
            msg = f"{name}: coefficient produces non-finite values"
            raise ConfigurationError(msg)
        lo, hi = float(samples.min()), float(samples.max())
        if self.lower is None:
            logger.debug("%s: lower bound inferred from samples as %g", name, lo)
            self.lower = lo
        if self.upper is None:
            logger.debug("%s: upper bound inferred from samples as %g", name, hi)
            self.upper = hi
        if positive and self.lower <= 0:
            msg = f"{name}: lower bound d0 must be positive, got {self.lower}"
            raise ConfigurationError(msg)
        if not positive and self.lower < 0:
            msg = f"{name}: influx must be nonnegative, lower bound is {self.lower}"
            raise ConfigurationError(msg)
        if lo < self.lower or hi > self.upper:
            msg = f"{name}: samples in [{lo}, {hi}] leave the declared bounds [{self.lower}, {self.upper}]"
            raise ConfigurationError(msg)

        limit = self.limit_profile(grid)
        if limit is not None and len(times) > 1:
            first = float(np.abs(samples[0] - limit).max())
            last = float(np.abs(samples[-1] - limit).max())
            if last > first and last > 0:
                logger.warning("%s: samples move away from the configured limit (%g -> %g)", name, first, last)

    def limit_defect(self, grid: Grid, t: float) -> float:
        """Volume integral of the squared distance between samples and the limit."""
        limit = self.limit_profile(grid)
        if limit is None:
            return 0.0
        diff = self.sample(grid, t) - limit
        return float(np.sum(diff * diff) * grid.cell_volume)

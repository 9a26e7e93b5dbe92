"""Run configuration: TOML documents, validation and the effective SimulationConfig.

A configuration document has the sections ``[grid]``, ``[params]``,
``[coefficients]``, ``[initial]`` and ``[run]``; sweep presets add
``[sweep]``. Validation failures are reported as ConfigurationError with the
dotted key path of the offending entry.
"""

import logging
import tomllib
from importlib import resources
from typing import Any, Literal, Protocol

import numpy as np
import tomli_w
from pydantic import BaseModel, ConfigDict, Field as PydanticField, InstanceOf, ValidationError, model_validator

from epidiff.discretization.coefficients import CoefficientSampler, CoefficientSpec
from epidiff.discretization.expression import Expression
from epidiff.discretization.grid import Field, Grid, State
from epidiff.errors import ConfigurationError
from epidiff.model.parameters import Parameters
from epidiff.settings import settings
from epidiff.types import FloatArray, LinearSolverKind, Species

logger = logging.getLogger(__name__)

PRESET_PACKAGE = "epidiff.presets"


class Forcing(Protocol):
    """Additive source terms, one array per species, evaluated at (grid, t)."""

    def __call__(self, grid: Grid, t: float) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]: ...


class GridSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    extents: tuple[float, ...] = PydanticField(min_length=1, max_length=2)
    cells: tuple[int, ...] = PydanticField(min_length=1, max_length=2)


class FieldSpec(BaseModel):
    """Initial datum: a constant or an expression in x and y."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    type: Literal["constant", "expression"] = "constant"
    value: float | None = None
    expression: str | None = None

    @model_validator(mode="before")
    @classmethod
    def _accept_bare_value(cls, data: object) -> object:
        if isinstance(data, int | float) and not isinstance(data, bool):
            return {"type": "constant", "value": float(data)}
        if isinstance(data, str):
            return {"type": "expression", "expression": data}
        return data

    @model_validator(mode="after")
    def _check_variant(self) -> "FieldSpec":
        if self.type == "constant" and self.value is None:
            msg = "constant initial data need a value"
            raise ValueError(msg)
        if self.type == "expression" and self.expression is None:
            msg = "expression initial data need an expression"
            raise ValueError(msg)
        return self

    def evaluate(self, grid: Grid) -> FloatArray:
        if self.type == "constant":
            return np.full(grid.cells, float(self.value))  # type: ignore[arg-type]
        x, y = grid.coordinates()
        return Expression(self.expression)(x, y, 0.0)  # type: ignore[arg-type]


class CoefficientsSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    d1: CoefficientSpec
    d2: CoefficientSpec
    d3: CoefficientSpec
    d4: CoefficientSpec
    b: CoefficientSpec


class InitialSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    S: FieldSpec
    I: FieldSpec  # noqa: E741
    R: FieldSpec
    B: FieldSpec


class RunSection(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    t_end: float = PydanticField(ge=0)
    dt_max: float = PydanticField(default=0.05, gt=0)
    solver_tol: float = PydanticField(default=1e-12, gt=0)
    positivity_safety: float = PydanticField(default=0.9, gt=0, le=1)
    positivity_limiter: bool = True


class SweepAxis(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    name: str
    min: float
    max: float
    count: int = PydanticField(ge=2)

    @model_validator(mode="after")
    def _check_name(self) -> "SweepAxis":
        if self.name not in Parameters.model_fields or self.name in {"velocity", "growth"}:
            msg = f"unknown parameter {self.name!r}"
            raise ValueError(msg)
        return self

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.min, self.max, self.count)]


class SweepSpec(BaseModel):
    """Parameter grid explored by the sweep driver.

    A point is classified as attractor-reaching iff J(t_end)/J(0) < threshold.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    axes: tuple[SweepAxis, ...] = PydanticField(min_length=1)
    t_end: float = PydanticField(gt=0)
    threshold: float = PydanticField(default=1e-4, gt=0)


class ConfigDocument(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    grid: GridSection
    params: Parameters
    coefficients: CoefficientsSection
    initial: InitialSection
    run: RunSection
    sweep: SweepSpec | None = None


class SimulationConfig(BaseModel):
    """Everything one simulation needs, validated and sampled onto the grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid
    params: Parameters
    diffusion: tuple[CoefficientSampler, CoefficientSampler, CoefficientSampler, CoefficientSampler]
    influx: CoefficientSampler
    initial: InstanceOf[State]
    t_end: float = PydanticField(ge=0)
    dt_max: float = PydanticField(gt=0)
    solver_tol: float = PydanticField(default=1e-12, gt=0)
    positivity_safety: float = PydanticField(default=0.9, gt=0, le=1)
    positivity_limiter: bool = True
    max_halvings: int = PydanticField(default_factory=lambda: settings.max_halvings, ge=0)
    negativity_tol: float = PydanticField(default_factory=lambda: settings.negativity_tol, ge=0)
    linear_solver: LinearSolverKind = PydanticField(default_factory=lambda: settings.linear_solver)
    forcing: Any = None
    source: ConfigDocument | None = None

    @model_validator(mode="after")
    def _check_state(self) -> "SimulationConfig":
        for species, field in self.initial.named():
            if field.grid != self.grid:
                msg = f"initial.{species.value}: field grid does not match the configured grid"
                raise ValueError(msg)
            if not field.is_finite() or field.min() < 0:
                msg = f"initial.{species.value}: initial data must be finite and nonnegative"
                raise ValueError(msg)
        if self.params.velocity and len(self.params.velocity) != self.grid.dim:
            msg = f"params.velocity: expected {self.grid.dim} components, got {len(self.params.velocity)}"
            raise ValueError(msg)
        return self

    @property
    def volume(self) -> float:
        return self.grid.volume


def _format_validation_error(exc: ValidationError) -> str:
    lines = []
    for error in exc.errors():
        path = ".".join(str(part) for part in error["loc"])
        lines.append(f"{path}: {error['msg']}" if path else error["msg"])
    return "; ".join(lines)


def parse_document(text: str) -> ConfigDocument:
    """Parse and validate a TOML configuration document.

    Raises:
        ConfigurationError: On TOML syntax errors, unknown keys or invalid values.
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        msg = f"malformed configuration: {exc}"
        raise ConfigurationError(msg) from exc
    try:
        return ConfigDocument.model_validate(data)
    except ValidationError as exc:
        raise ConfigurationError(_format_validation_error(exc)) from exc


def build_config(doc: ConfigDocument, **overrides: Any) -> SimulationConfig:
    """Sample a validated document onto its grid.

    Coefficient bounds are checked at t = 0 and t = t_end.

    Raises:
        ConfigurationError: If the grid, a coefficient or an initial datum is invalid.
    """
    try:
        grid = Grid.from_extents(doc.grid.extents, doc.grid.cells)
    except (ValidationError, ValueError) as exc:
        msg = f"grid: {exc}"
        raise ConfigurationError(msg) from exc

    times = (0.0, doc.run.t_end)
    samplers: dict[str, CoefficientSampler] = {}
    for name in ("d1", "d2", "d3", "d4", "b"):
        spec: CoefficientSpec = getattr(doc.coefficients, name)
        sampler = CoefficientSampler.from_spec(spec)
        sampler.resolve_bounds(grid, times, name=f"coefficients.{name}", positive=name != "b")
        samplers[name] = sampler

    arrays = []
    for species in Species:
        values = getattr(doc.initial, species.value).evaluate(grid)
        if not np.all(np.isfinite(values)) or values.min() < 0:
            msg = f"initial.{species.value}: initial data must be finite and nonnegative"
            raise ConfigurationError(msg)
        arrays.append(values)

    fields: dict[str, Any] = {
        "grid": grid,
        "params": doc.params,
        "diffusion": (samplers["d1"], samplers["d2"], samplers["d3"], samplers["d4"]),
        "influx": samplers["b"],
        "initial": State(*(Field(a, grid) for a in arrays)),
        "t_end": doc.run.t_end,
        "dt_max": doc.run.dt_max,
        "solver_tol": doc.run.solver_tol,
        "positivity_safety": doc.run.positivity_safety,
        "positivity_limiter": doc.run.positivity_limiter,
        "source": doc,
    }
    fields.update(overrides)
    try:
        return SimulationConfig(**fields)
    except ValidationError as exc:
        raise ConfigurationError(_format_validation_error(exc)) from exc


def parse_config(text: str) -> SimulationConfig:
    """Parse, validate and sample a TOML configuration into a SimulationConfig."""
    return build_config(parse_document(text))


def dump_config(doc: ConfigDocument) -> str:
    """Serialise the effective (fully defaulted) document back to TOML."""
    return tomli_w.dumps(doc.model_dump(mode="json", exclude_none=True))


def list_presets() -> dict[str, str]:
    """Shipped preset names mapped to the first line of their description."""
    presets: dict[str, str] = {}
    for entry in sorted(resources.files(PRESET_PACKAGE).iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".toml"):
            continue
        first = entry.read_text(encoding="utf-8").splitlines()[0]
        presets[entry.name.removesuffix(".toml")] = first.lstrip("# ").strip()
    return presets


def load_preset_text(name: str) -> str:
    """Return the TOML text of a shipped preset.

    Raises:
        ConfigurationError: If no preset with that name exists.
    """
    resource = resources.files(PRESET_PACKAGE).joinpath(f"{name}.toml")
    if not resource.is_file():
        msg = f"unknown preset {name!r}; available: {', '.join(list_presets())}"
        raise ConfigurationError(msg)
    return resource.read_text(encoding="utf-8")


def load_preset(name: str) -> ConfigDocument:
    return parse_document(load_preset_text(name))

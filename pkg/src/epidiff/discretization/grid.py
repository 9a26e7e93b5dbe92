"""Structured cell-centred grids and the fields that live on them."""

import math
from collections.abc import Iterator
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field as PydanticField, model_validator

from epidiff.errors import ContractViolation
from epidiff.types import FloatArray, Species

MIN_CELLS_PER_AXIS = 3


class Grid(BaseModel):
    """Axis-aligned box split into uniform cells.

    The box spans ``[0, cells[k] * spacing[k]]`` along each axis. Values are
    stored at cell centres in row-major order.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    cells: tuple[int, ...] = PydanticField(min_length=1, max_length=2)
    spacing: tuple[float, ...] = PydanticField(min_length=1, max_length=2)

    @model_validator(mode="after")
    def _check_geometry(self) -> "Grid":
        if len(self.cells) != len(self.spacing):
            msg = "cells and spacing must have one entry per axis"
            raise ValueError(msg)
        if any(n < MIN_CELLS_PER_AXIS for n in self.cells):
            msg = f"every axis needs at least {MIN_CELLS_PER_AXIS} cells"
            raise ValueError(msg)
        if any(h <= 0 for h in self.spacing):
            msg = "spacing must be positive"
            raise ValueError(msg)
        return self

    @classmethod
    def from_extents(cls, extents: tuple[float, ...], cells: tuple[int, ...]) -> "Grid":
        if len(extents) != len(cells):
            msg = "extents and cells must have one entry per axis"
            raise ValueError(msg)
        return cls(cells=tuple(cells), spacing=tuple(e / n for e, n in zip(extents, cells, strict=True)))

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def size(self) -> int:
        return math.prod(self.cells)

    @property
    def extents(self) -> tuple[float, ...]:
        return tuple(n * h for n, h in zip(self.cells, self.spacing, strict=True))

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    @property
    def volume(self) -> float:
        return self.cell_volume * self.size

    def centers(self) -> tuple[FloatArray, ...]:
        """Cell-centre coordinates, one array of shape ``cells`` per axis."""
        axes = [(np.arange(n) + 0.5) * h for n, h in zip(self.cells, self.spacing, strict=True)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def coordinates(self) -> tuple[FloatArray, FloatArray]:
        """Return (x, y) centre arrays; y is zero on one-dimensional grids."""
        centers = self.centers()
        if self.dim == 1:
            return centers[0], np.zeros(self.cells)
        return centers[0], centers[1]


@dataclass(frozen=True, eq=False)
class Field:
    """One scalar value per cell centre.

    A frozen dataclass rather than a pydantic model: the payload is a raw
    float64 ndarray checked against the grid shape on construction.
    """

    values: FloatArray
    grid: Grid

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.cells:
            msg = f"field shape {values.shape} does not match grid cells {self.grid.cells}"
            raise ContractViolation(msg)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Field":
        return cls(np.full(grid.cells, float(value)), grid)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(np.zeros(grid.cells), grid)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def min(self) -> float:
        return float(self.values.min())

    def require_same_grid(self, other: "Field") -> None:
        if self.grid != other.grid:
            msg = "fields live on different grids"
            raise ContractViolation(msg)


class State(NamedTuple):
    """The vector Z = (S, I, R, B) at one time level."""

    S: Field
    I: Field  # noqa: E741
    R: Field
    B: Field

    @property
    def grid(self) -> Grid:
        return self.S.grid

    @classmethod
    def from_arrays(cls, grid: Grid, arrays: "tuple[FloatArray, ...] | list[FloatArray]") -> "State":
        return cls(*(Field(np.array(a, dtype=np.float64), grid) for a in arrays))

    @classmethod
    def zeros(cls, grid: Grid) -> "State":
        return cls(*(Field.zeros(grid) for _ in Species))

    def arrays(self) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
        return (self.S.values, self.I.values, self.R.values, self.B.values)

    def named(self) -> Iterator[tuple[Species, Field]]:
        return zip(Species, self, strict=True)

    def minima(self) -> tuple[float, float, float, float]:
        return (self.S.min(), self.I.min(), self.R.min(), self.B.min())

    def is_finite(self) -> bool:
        return all(f.is_finite() for f in self)

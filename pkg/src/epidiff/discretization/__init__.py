"""Structured-grid fields, coefficient samplers and finite-volume operators."""

from epidiff.discretization.coefficients import CoefficientSampler, CoefficientSpec
from epidiff.discretization.expression import Expression, ExpressionError
from epidiff.discretization.grid import Field, Grid, State
from epidiff.discretization.operators import (
    convect,
    convection_split,
    diffuse,
    diffusion_matrix,
    field_reduce,
    integrate,
)
from epidiff.discretization.snapshot import Snapshot, read_snapshot, write_snapshot

__all__ = [
    "CoefficientSampler",
    "CoefficientSpec",
    "Expression",
    "ExpressionError",
    "Field",
    "Grid",
    "Snapshot",
    "State",
    "convect",
    "convection_split",
    "diffuse",
    "diffusion_matrix",
    "field_reduce",
    "integrate",
    "read_snapshot",
    "write_snapshot",
]

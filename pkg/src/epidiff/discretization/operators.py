"""Finite-volume operators on structured grids.

Diffusion uses face coefficients equal to the arithmetic mean of the two
adjacent cell samples and zero flux through every boundary face, so the
volume-weighted sum of ``diffuse(u)`` telescopes to zero. Convection is first
order upwind with mirrored ghost cells.
"""

from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse

from epidiff.discretization.grid import Field, Grid
from epidiff.errors import ContractViolation
from epidiff.types import FloatArray, ReduceKind

if TYPE_CHECKING:
    from epidiff.discretization.coefficients import CoefficientSampler


def diffusion_matrix(grid: Grid, coefficient: FloatArray) -> sparse.csr_array:
    """Assemble the discrete operator u -> div(d grad u) with zero-flux faces.

    Args:
        grid: the grid the operator acts on
        coefficient: cell samples of d, shape ``grid.cells``

    Returns:
        A symmetric ``(size, size)`` matrix with nonnegative off-diagonal and
        nonpositive diagonal entries.
    """
    coefficient = np.asarray(coefficient, dtype=np.float64)
    if coefficient.shape != grid.cells:
        msg = f"coefficient shape {coefficient.shape} does not match grid cells {grid.cells}"
        raise ContractViolation(msg)

    index = np.arange(grid.size).reshape(grid.cells)
    flat = coefficient.ravel()
    rows: list[FloatArray] = []
    cols: list[FloatArray] = []
    vals: list[FloatArray] = []
    for axis, (n, h) in enumerate(zip(grid.cells, grid.spacing, strict=True)):
        lo = np.take(index, np.arange(n - 1), axis=axis).ravel()
        hi = np.take(index, np.arange(1, n), axis=axis).ravel()
        weight = 0.5 * (flat[lo] + flat[hi]) / (h * h)
        rows += [lo, hi, lo, hi]
        cols += [hi, lo, lo, hi]
        vals += [weight, weight, -weight, -weight]

    matrix = sparse.coo_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(grid.size, grid.size),
    )
    return matrix.tocsr()


def apply(matrix: sparse.csr_array, u: Field) -> Field:
    return Field((matrix @ u.values.ravel()).reshape(u.grid.cells), u.grid)


def diffuse(u: Field, coeff: "CoefficientSampler", t: float) -> Field:
    """Discrete div(d grad u) with d sampled from ``coeff`` at time t."""
    return apply(diffusion_matrix(u.grid, coeff.sample(u.grid, t)), u)


def _check_velocity(grid: Grid, velocity: Sequence[float]) -> tuple[float, ...]:
    if len(velocity) == 0:
        return (0.0,) * grid.dim
    if len(velocity) != grid.dim:
        msg = f"velocity has {len(velocity)} components, grid has dimension {grid.dim}"
        raise ContractViolation(msg)
    return tuple(float(v) for v in velocity)


def upwind_neighbor(values: FloatArray, axis: int, speed: float) -> FloatArray:
    """Value of the upwind neighbour of every cell, mirrored at the boundary."""
    n = values.shape[axis]
    if speed > 0:
        take = np.concatenate(([0], np.arange(n - 1)))
    else:
        take = np.concatenate((np.arange(1, n), [n - 1]))
    return np.take(values, take, axis=axis)


def convect(B: Field, velocity: Sequence[float]) -> Field:
    """Return -sum_k b_k dB/dx_k by first order upwind differences.

    Velocities are constant in space and time.

    Raises:
        ContractViolation: If the velocity length differs from the grid dimension.
    """
    speeds = _check_velocity(B.grid, velocity)
    out = np.zeros(B.grid.cells)
    for axis, (speed, h) in enumerate(zip(speeds, B.grid.spacing, strict=True)):
        if speed == 0.0:
            continue
        rate = abs(speed) / h
        out += rate * (upwind_neighbor(B.values, axis, speed) - B.values)
    return Field(out, B.grid)


def convection_split(B: Field, velocity: Sequence[float]) -> tuple[FloatArray, float]:
    """Production and destruction rate of upwind convection.

    ``convect(B) == production - rate * B`` with both parts nonnegative for
    nonnegative B.
    """
    speeds = _check_velocity(B.grid, velocity)
    production = np.zeros(B.grid.cells)
    rate = 0.0
    for axis, (speed, h) in enumerate(zip(speeds, B.grid.spacing, strict=True)):
        if speed == 0.0:
            continue
        production += abs(speed) / h * upwind_neighbor(B.values, axis, speed)
        rate += abs(speed) / h
    return production, rate


def field_reduce(u: Field, kind: ReduceKind) -> float:
    """Volume-weighted norms and extrema of a field."""
    match kind:
        case ReduceKind.L1:
            return float(np.sum(np.abs(u.values)) * u.grid.cell_volume)
        case ReduceKind.L2SQ:
            return float(np.sum(u.values * u.values) * u.grid.cell_volume)
        case ReduceKind.MIN:
            return float(u.values.min())
        case ReduceKind.MAX:
            return float(u.values.max())


def integrate(u: Field) -> float:
    """Volume-weighted sum of a field."""
    return float(np.sum(u.values) * u.grid.cell_volume)


def inner(u: Field, v: Field) -> float:
    u.require_same_grid(v)
    return float(np.sum(u.values * v.values) * u.grid.cell_volume)

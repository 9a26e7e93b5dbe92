"""Tests for grids, fields and finite-volume operators."""

import numpy as np
import pytest
from pydantic import ValidationError

from epidiff.discretization.coefficients import CoefficientSampler
from epidiff.discretization.grid import Field, Grid, State
from epidiff.discretization.operators import (
    convect,
    convection_split,
    diffuse,
    diffusion_matrix,
    field_reduce,
    inner,
    integrate,
)
from epidiff.errors import ContractViolation
from epidiff.types import ReduceKind


class TestGrid:
    """Tests for Grid and Field."""

    def test_from_extents(self):
        """Test spacing, volume and cell centres."""
        grid = Grid.from_extents((2.0, 1.0), (4, 5))

        assert grid.spacing == (0.5, 0.2)
        assert grid.size == 20
        assert grid.volume == pytest.approx(2.0)
        x, y = grid.coordinates()
        assert x.shape == (4, 5)
        assert x[0, 0] == pytest.approx(0.25)
        assert y[0, -1] == pytest.approx(0.9)

    def test_one_dimensional_coordinates(self, grid_1d):
        """Test that y is zero on a one-dimensional grid."""
        _, y = grid_1d.coordinates()

        assert np.all(y == 0)

    def test_rejects_small_or_mismatched_grids(self):
        """Test that degenerate geometry is rejected."""
        with pytest.raises(ValidationError):
            Grid(cells=(2,), spacing=(0.5,))
        with pytest.raises(ValidationError):
            Grid(cells=(4, 4), spacing=(0.25,))
        with pytest.raises(ValidationError):
            Grid(cells=(4, 4, 4), spacing=(0.25, 0.25, 0.25))

    def test_field_shape_checked(self, grid_1d):
        """Test that a field must match its grid."""
        with pytest.raises(ContractViolation):
            Field(np.zeros(5), grid_1d)

    def test_state_minima(self, grid_1d):
        """Test per-species minima of a state."""
        Z = State.from_arrays(grid_1d, [np.full(16, v) for v in (1.0, 2.0, 3.0, 4.0)])

        assert Z.minima() == (1.0, 2.0, 3.0, 4.0)
        assert Z.is_finite()


class TestDiffusion:
    """Tests for the zero-flux diffusion operator."""

    def test_matrix_is_symmetric_m_matrix(self, grid_2d):
        """Test symmetry and the sign pattern of the stencil."""
        x, y = grid_2d.coordinates()
        L = diffusion_matrix(grid_2d, 1.0 + x + y).toarray()

        np.testing.assert_allclose(L, L.T)
        off = L - np.diag(np.diag(L))
        assert np.all(off >= 0)
        assert np.all(np.diag(L) < 0)

    def test_diffusion_conserves_mass(self, grid_2d):
        """Test that the volume integral of diffuse(u) vanishes."""
        rng = np.random.default_rng(0)
        u = Field(rng.uniform(0, 1, grid_2d.cells), grid_2d)
        sampler = CoefficientSampler.constant(0.7)

        assert integrate(diffuse(u, sampler, 0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_constant_is_in_kernel(self, grid_1d):
        """Test that constants are not diffused."""
        u = Field.constant(grid_1d, 3.0)
        out = diffuse(u, CoefficientSampler.constant(2.0), 0.0)

        np.testing.assert_allclose(out.values, 0.0, atol=1e-12)

    def test_second_order_on_cosine(self):
        """Test the stencil against the exact second derivative of cos(pi x)."""
        errors = []
        for n in (32, 64):
            grid = Grid.from_extents((1.0,), (n,))
            (x,) = grid.centers()
            L = diffusion_matrix(grid, np.ones(grid.cells))
            approx = L @ np.cos(np.pi * x)
            interior = slice(1, n - 1)
            errors.append(np.max(np.abs(approx[interior] + np.pi**2 * np.cos(np.pi * x[interior]))))

        assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.1)

    def test_coefficient_shape_checked(self, grid_1d):
        """Test that coefficient samples must match the grid."""
        with pytest.raises(ContractViolation):
            diffusion_matrix(grid_1d, np.ones(4))


class TestConvection:
    """Tests for upwind convection."""

    def test_constant_is_not_convected(self, grid_2d):
        """Test that a constant field has zero upwind derivative."""
        B = Field.constant(grid_2d, 2.0)

        np.testing.assert_allclose(convect(B, (0.5, -1.0)).values, 0.0)

    def test_split_matches_convect(self, grid_2d):
        """Test convect(B) = production - rate * B."""
        rng = np.random.default_rng(1)
        B = Field(rng.uniform(0, 1, grid_2d.cells), grid_2d)
        production, rate = convection_split(B, (0.5, -1.0))

        assert rate == pytest.approx(0.5 / 0.125 + 1.0 / 0.125)
        assert np.all(production >= 0)
        np.testing.assert_allclose(production - rate * B.values, convect(B, (0.5, -1.0)).values)

    def test_upwind_direction(self, grid_1d):
        """Test that a positive speed takes the left neighbour."""
        B = Field(np.arange(16, dtype=float), grid_1d)
        out = convect(B, (1.0,)).values

        h = grid_1d.spacing[0]
        assert out[0] == 0.0
        np.testing.assert_allclose(out[1:], -1.0 / h)

    def test_velocity_dimension_checked(self, grid_1d):
        """Test that velocity components must match the grid dimension."""
        with pytest.raises(ContractViolation):
            convect(Field.zeros(grid_1d), (1.0, 1.0))


class TestReductions:
    """Tests for volume-weighted reductions."""

    def test_reductions(self, grid_1d):
        """Test L1, squared L2, min and max."""
        u = Field(np.linspace(-1.0, 1.0, 16), grid_1d)
        h = grid_1d.spacing[0]

        assert field_reduce(u, ReduceKind.L1) == pytest.approx(np.sum(np.abs(u.values)) * h)
        assert field_reduce(u, ReduceKind.L2SQ) == pytest.approx(np.sum(u.values**2) * h)
        assert field_reduce(u, ReduceKind.MIN) == -1.0
        assert field_reduce(u, ReduceKind.MAX) == 1.0
        assert integrate(u) == pytest.approx(0.0, abs=1e-15)

    def test_inner_requires_same_grid(self, grid_1d, grid_2d):
        """Test that inner products across grids are rejected."""
        with pytest.raises(ContractViolation):
            inner(Field.zeros(grid_1d), Field.zeros(grid_2d))

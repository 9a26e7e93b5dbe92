"""Manufactured solutions and grid/step refinement studies.

Every manufactured profile is built from cos(pi x / Lx) (times cos(pi y / Ly)
in two dimensions), which has zero normal derivative on the box boundary.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import sparse

from epidiff.config import SimulationConfig
from epidiff.discretization.coefficients import CoefficientSampler
from epidiff.discretization.grid import Field, Grid, State
from epidiff.discretization.operators import diffusion_matrix, field_reduce
from epidiff.model.parameters import Parameters
from epidiff.model.reaction import reaction
from epidiff.solver.linear import solve_implicit
from epidiff.solver.steady import SteadyProblem, solve_s_infinity
from epidiff.solver.stepper import run
from epidiff.types import FloatArray, ReduceKind
from epidiff.verification.common import observed_order

Quad = tuple[float, float, float, float]


class StudyKind(str, Enum):
    SPATIAL = "spatial"
    TEMPORAL = "temporal"
    EXACT = "exact"


class ConvergenceStudy(NamedTuple):
    name: str
    kind: StudyKind
    sizes: tuple[float, ...]
    errors: tuple[float, ...]

    @property
    def order(self) -> float:
        return observed_order(self.sizes, self.errors)


def _cosine_mode(grid: Grid) -> tuple[FloatArray, float]:
    """The product of cosines on the grid and minus its Laplacian eigenvalue."""
    mode = np.ones(grid.cells)
    eigenvalue = 0.0
    for centers, extent in zip(grid.centers(), grid.extents, strict=True):
        mode = mode * np.cos(math.pi * centers / extent)
        eigenvalue += (math.pi / extent) ** 2
    return mode, eigenvalue


def l2_error(u: Field, exact: FloatArray) -> float:
    return math.sqrt(field_reduce(Field(u.values - exact, u.grid), ReduceKind.L2SQ))


@dataclass(frozen=True)
class ManufacturedSystem:
    """u_k = base_k + amplitude_k * mode(x) * exp(-t) for the four species.

    Calling the instance returns the additive sources that make these
    profiles exact solutions of the coupled system with constant diffusion
    rates and a constant influx.
    """

    params: Parameters
    base: Quad
    amplitude: Quad
    diffusion: Quad
    influx: float

    def exact(self, grid: Grid, t: float) -> State:
        mode, _ = _cosine_mode(grid)
        decay = math.exp(-t)
        return State.from_arrays(grid, [a + c * mode * decay for a, c in zip(self.base, self.amplitude, strict=True)])

    def __call__(self, grid: Grid, t: float) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray]:
        mode, eigenvalue = _cosine_mode(grid)
        decay = math.exp(-t)
        S, I, R, B = self.exact(grid, t).arrays()  # noqa: E741
        f = reaction(S, I, R, B, self.influx, self.params)
        sources = [
            (dk * eigenvalue - 1.0) * c * mode * decay - np.asarray(fk)
            for dk, c, fk in zip(self.diffusion, self.amplitude, f, strict=True)
        ]
        return (sources[0], sources[1], sources[2], sources[3])

    def config(self, grid: Grid, t_end: float, dt: float) -> SimulationConfig:
        return SimulationConfig(
            grid=grid,
            params=self.params,
            diffusion=tuple(CoefficientSampler.constant(dk) for dk in self.diffusion),  # type: ignore[arg-type]
            influx=CoefficientSampler.constant(self.influx),
            initial=self.exact(grid, 0.0),
            t_end=t_end,
            dt_max=dt,
            forcing=self,
        )

    def error(self, grid: Grid, t_end: float, dt: float) -> float:
        """Combined L2 error of all four species at t_end."""
        result = run(self.config(grid, t_end, dt), target=self.exact(grid, 0.0))
        exact = self.exact(grid, result.t_final)
        return math.sqrt(sum(l2_error(u, v.values) ** 2 for u, v in zip(result.final, exact, strict=True)))


MMS_PARAMETERS = Parameters(d=1.0, gamma=0.5, sigma=0.5, delta=1.0, xi=0.5, g=0.5, K=2.0, beta1=0.5, beta2=0.5)
COUPLED = ManufacturedSystem(
    params=MMS_PARAMETERS,
    base=(2.0, 1.5, 1.2, 1.5),
    amplitude=(0.5, 0.4, 0.3, 0.5),
    diffusion=(1.0, 0.5, 0.8, 0.2),
    influx=1.0,
)
CONSTANT = ManufacturedSystem(
    params=MMS_PARAMETERS,
    base=(2.0, 1.5, 1.2, 1.5),
    amplitude=(0.0, 0.0, 0.0, 0.0),
    diffusion=(1.0, 0.5, 0.8, 0.2),
    influx=1.0,
)


def scalar_diffusion_error(cells: int, t_end: float = 0.1, courant: float = 0.2) -> float:
    """Backward-Euler error for u_t = (d u_x)_x + f with u = (2 + cos(pi x)) exp(-t), d = 1 + x."""
    grid = Grid.from_extents((1.0,), (cells,))
    (x,) = grid.centers()
    h = grid.spacing[0]
    steps = math.ceil(t_end / (courant * h * h))
    dt = t_end / steps
    matrix = diffusion_matrix(grid, 1.0 + x)
    implicit = (sparse.eye_array(grid.size, format="csr") - dt * matrix).tocsr()

    def source(t: float) -> FloatArray:
        return math.exp(-t) * (
            -(2.0 + np.cos(math.pi * x)) + math.pi * np.sin(math.pi * x) + (1.0 + x) * math.pi**2 * np.cos(math.pi * x)
        )

    u = Field(2.0 + np.cos(math.pi * x), grid)
    for n in range(steps):
        t = n * dt
        u = solve_implicit(implicit, Field(u.values + dt * source(t), grid), 1e-13).solution
    return l2_error(u, (2.0 + np.cos(math.pi * x)) * math.exp(-t_end))


def steady_error(cells: int) -> float:
    """Error of S_inf for S* = 2 + cos(pi x / 4) on [0, 4] with d1 = 1 and d = 1."""
    extent = 4.0
    grid = Grid.from_extents((extent,), (cells,))
    (x,) = grid.centers()
    k = math.pi / extent
    exact = 2.0 + np.cos(k * x)
    b0 = k * k * np.cos(k * x) + exact
    problem = SteadyProblem(grid=grid, d1_inf=Field.constant(grid, 1.0), b0_profile=Field(b0, grid), d=1.0)
    return l2_error(solve_s_infinity(problem, 1e-13), exact)


def _steady_study() -> ConvergenceStudy:
    cells = (32, 64, 128)
    return ConvergenceStudy(
        "steady_spatial",
        StudyKind.SPATIAL,
        tuple(4.0 / n for n in cells),
        tuple(steady_error(n) for n in cells),
    )


def _scalar_study() -> ConvergenceStudy:
    cells = (16, 32, 64)
    return ConvergenceStudy(
        "diffusion_spatial",
        StudyKind.SPATIAL,
        tuple(1.0 / n for n in cells),
        tuple(scalar_diffusion_error(n) for n in cells),
    )


def _coupled_spatial_study() -> ConvergenceStudy:
    cells = (16, 32, 64)
    errors = []
    for n in cells:
        grid = Grid.from_extents((1.0,), (n,))
        h = grid.spacing[0]
        errors.append(COUPLED.error(grid, t_end=0.1, dt=0.5 * h * h))
    return ConvergenceStudy("coupled_spatial", StudyKind.SPATIAL, tuple(1.0 / n for n in cells), tuple(errors))


def _coupled_temporal_study() -> ConvergenceStudy:
    steps = (0.02, 0.01, 0.005)
    grid = Grid.from_extents((1.0,), (256,))
    return ConvergenceStudy(
        "coupled_temporal",
        StudyKind.TEMPORAL,
        steps,
        tuple(COUPLED.error(grid, t_end=0.5, dt=dt) for dt in steps),
    )


def _constant_study() -> ConvergenceStudy:
    cells = (8, 16, 32)
    errors = tuple(CONSTANT.error(Grid.from_extents((1.0, 1.0), (n, n)), t_end=0.2, dt=0.05) for n in cells)
    return ConvergenceStudy("constant_solution", StudyKind.EXACT, tuple(1.0 / n for n in cells), errors)


STUDIES: dict[str, Callable[[], ConvergenceStudy]] = {
    "steady_spatial": _steady_study,
    "diffusion_spatial": _scalar_study,
    "coupled_spatial": _coupled_spatial_study,
    "coupled_temporal": _coupled_temporal_study,
    "constant_solution": _constant_study,
}


def run_study(name: str) -> ConvergenceStudy:
    return STUDIES[name]()

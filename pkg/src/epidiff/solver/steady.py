"""The limiting elliptic problem -div(d1_inf grad S) + d S = b0 and its attractor."""

import logging

from pydantic import BaseModel, ConfigDict, InstanceOf, PositiveFloat, model_validator
from scipy import sparse

from epidiff.config import SimulationConfig
from epidiff.discretization.grid import Field, Grid, State
from epidiff.discretization.operators import diffusion_matrix
from epidiff.settings import settings
from epidiff.solver.linear import LinearSolveResult, solve_implicit
from epidiff.types import LinearSolverKind

logger = logging.getLogger(__name__)


class SteadyProblem(BaseModel):
    """Zero-flux elliptic problem for the susceptible equilibrium S_inf."""

    model_config = ConfigDict(frozen=True)

    grid: Grid
    d1_inf: InstanceOf[Field]
    b0_profile: InstanceOf[Field]
    d: PositiveFloat

    @model_validator(mode="after")
    def _check_data(self) -> "SteadyProblem":
        if self.d1_inf.grid != self.grid or self.b0_profile.grid != self.grid:
            msg = "d1_inf and b0_profile must live on the problem grid"
            raise ValueError(msg)
        if self.d1_inf.min() <= 0:
            msg = "d1_inf must be strictly positive"
            raise ValueError(msg)
        if self.b0_profile.min() < 0:
            msg = "b0_profile must be nonnegative"
            raise ValueError(msg)
        return self


def steady_matrix(prob: SteadyProblem) -> sparse.csr_array:
    laplacian = diffusion_matrix(prob.grid, prob.d1_inf.values)
    return (prob.d * sparse.eye_array(prob.grid.size, format="csr") - laplacian).tocsr()


def solve_steady(
    prob: SteadyProblem,
    tol: float | None = None,
    *,
    method: LinearSolverKind | None = None,
) -> LinearSolveResult:
    """Solve for S_inf and report iterations and the relative residual.

    Raises:
        SolverError: If the iterative solve does not reach ``tol``.
    """
    tol = settings.steady_tol if tol is None else tol
    method = settings.linear_solver if method is None else method
    guess = Field(prob.b0_profile.values / prob.d, prob.grid)
    result = solve_implicit(steady_matrix(prob), prob.b0_profile, tol, x0=guess, method=method)
    logger.debug("steady solve: %d iterations, residual %.3e", result.iterations, result.residual)
    return result


def solve_s_infinity(prob: SteadyProblem, tol: float | None = None) -> Field:
    """Return S_inf with relative residual at most ``tol`` (default ``settings.steady_tol``)."""
    return solve_steady(prob, tol).solution


def attractor_target(prob: SteadyProblem, tol: float | None = None) -> State:
    """The global attractor (S_inf, 0, 0, 0)."""
    s_inf = solve_s_infinity(prob, tol)
    zero = Field.zeros(prob.grid)
    return State(s_inf, zero, zero, zero)


def steady_problem_for(cfg: SimulationConfig) -> SteadyProblem | None:
    """Build the limiting problem from the d1 and influx limits of a run.

    Returns None when either limit profile is unknown.
    """
    d1_inf = cfg.diffusion[0].limit_profile(cfg.grid)
    b0 = cfg.influx.limit_profile(cfg.grid)
    if d1_inf is None or b0 is None:
        logger.info("no limit profile for d1 or b; attractor distance is not tracked")
        return None
    return SteadyProblem(grid=cfg.grid, d1_inf=Field(d1_inf, cfg.grid), b0_profile=Field(b0, cfg.grid), d=cfg.params.d)

"""Linear solves, the split time stepper and the steady-state problem."""

from epidiff.solver.linear import LinearSolveResult, solve_implicit
from epidiff.solver.steady import (
    SteadyProblem,
    attractor_target,
    solve_s_infinity,
    solve_steady,
    steady_problem_for,
)
from epidiff.solver.stepper import DiffusionOperators, Observer, positivity_dt, run, step

__all__ = [
    "DiffusionOperators",
    "LinearSolveResult",
    "Observer",
    "SteadyProblem",
    "attractor_target",
    "positivity_dt",
    "run",
    "solve_implicit",
    "solve_s_infinity",
    "solve_steady",
    "step",
    "steady_problem_for",
]

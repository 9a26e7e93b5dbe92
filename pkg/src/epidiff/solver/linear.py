"""Linear solves for the implicit diffusion stage and the steady-state problem.

The matrices handled here are symmetric M-matrices (identity minus a positive
multiple of the zero-flux diffusion stencil, or a positive shift of its
negative). Two-dimensional problems use conjugate gradients with a Jacobi
preconditioner; one-dimensional problems are tridiagonal and solved directly.
"""

import logging
from typing import NamedTuple

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import linalg as sparse_linalg

from epidiff.discretization.grid import Field
from epidiff.errors import ContractViolation, SolverError
from epidiff.types import FloatArray, LinearSolverKind

logger = logging.getLogger(__name__)

ITERATION_CAP_FACTOR = 10


class LinearSolveResult(NamedTuple):
    solution: Field
    iterations: int
    residual: float


def relative_residual(matrix: sparse.csr_array, x: FloatArray, b: FloatArray) -> float:
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0:
        return float(np.linalg.norm(matrix @ x))
    return float(np.linalg.norm(b - matrix @ x)) / norm_b


def _jacobi_pcg(
    matrix: sparse.csr_array,
    b: FloatArray,
    x0: FloatArray,
    tol: float,
    max_iterations: int,
) -> tuple[FloatArray, int, bool]:
    diag = matrix.diagonal()
    if np.any(diag <= 0):
        msg = "matrix has a nonpositive diagonal entry and cannot be SPD"
        raise ContractViolation(msg)
    inv_diag = 1.0 / diag

    x = x0.copy()
    r = b - matrix @ x
    threshold = tol * float(np.linalg.norm(b))
    if np.linalg.norm(r) <= threshold:
        return x, 0, True

    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    for k in range(1, max_iterations + 1):
        ap = matrix @ p
        alpha = rz / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        if np.linalg.norm(r) <= threshold:
            return x, k, True
        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, max_iterations, False


def _tridiagonal_solve(matrix: sparse.csr_array, b: FloatArray) -> FloatArray:
    n = b.size
    banded = np.zeros((3, n))
    banded[0, 1:] = matrix.diagonal(1)
    banded[1, :] = matrix.diagonal()
    banded[2, :-1] = matrix.diagonal(-1)
    return linalg.solve_banded((1, 1), banded, b)


def _natural_lu_solve(matrix: sparse.csr_array, b: FloatArray) -> FloatArray:
    # Natural ordering without pivoting keeps every elimination step sign-preserving on M-matrices.
    factor = sparse_linalg.splu(
        sparse.csc_matrix(matrix),
        permc_spec="NATURAL",
        diag_pivot_thresh=0.0,
        options={"SymmetricMode": True},
    )
    return factor.solve(b)


def solve_implicit(
    matrix: sparse.csr_array,
    rhs: Field,
    tol: float,
    *,
    x0: Field | None = None,
    max_iterations: int | None = None,
    method: LinearSolverKind = LinearSolverKind.AUTO,
) -> LinearSolveResult:
    """Solve ``matrix @ u = rhs`` for a symmetric positive definite M-matrix.

    Args:
        matrix: sparse system matrix of shape ``(size, size)``
        rhs: right-hand side field
        tol: relative residual tolerance
        x0: initial guess for conjugate gradients, defaults to ``rhs``
        max_iterations: iteration cap, defaults to 10 times the number of cells
        method: ``auto`` picks the tridiagonal direct solve in one dimension
            and Jacobi-preconditioned conjugate gradients otherwise

    Returns:
        LinearSolveResult: solution, iteration count and relative residual.

    Raises:
        SolverError: If conjugate gradients does not reach ``tol`` within the cap.
    """
    grid = rhs.grid
    if matrix.shape != (grid.size, grid.size):
        msg = f"matrix shape {matrix.shape} does not match grid size {grid.size}"
        raise ContractViolation(msg)
    b = rhs.values.ravel()

    if method is LinearSolverKind.AUTO:
        method = LinearSolverKind.DIRECT if grid.dim == 1 else LinearSolverKind.CG

    if method is LinearSolverKind.DIRECT:
        x = _tridiagonal_solve(matrix, b) if grid.dim == 1 else _natural_lu_solve(matrix, b)
        residual = relative_residual(matrix, x, b)
        return LinearSolveResult(Field(x.reshape(grid.cells), grid), 1, residual)

    cap = max_iterations if max_iterations is not None else ITERATION_CAP_FACTOR * grid.size
    start = (x0 if x0 is not None else rhs).values.ravel().astype(np.float64)
    x, iterations, converged = _jacobi_pcg(matrix, b, start, tol, cap)
    residual = relative_residual(matrix, x, b)
    if not converged:
        msg = f"conjugate gradients stopped after {iterations} iterations at relative residual {residual:.3e}"
        raise SolverError(msg, iterations=iterations, residual=residual)
    logger.debug("conjugate gradients converged in %d iterations (residual %.3e)", iterations, residual)
    return LinearSolveResult(Field(x.reshape(grid.cells), grid), iterations, residual)

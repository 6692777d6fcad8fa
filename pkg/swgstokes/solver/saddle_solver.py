#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        saddle_solver.py
# Purpose:     Krylov and dense direct solvers for the Stokes saddle point system
#
# Author:      swgstokes developers
#
# Created:     07-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Solvers of the saddle point system.

:func:`solve_saddle` runs the minimum residual method (``scipy.sparse.linalg.minres``) on the operator
``P A P``, where ``P`` removes the mean of the pressure block. The constant pressure, which spans the kernel of the
matrix, is thus never seen by the iteration. The right hand side is projected the same way. The preconditioner is
the inverse of the velocity diagonal on the velocity block and ``1/|T|`` on the pressure block.

The residual estimate of the Krylov method is preconditioned, so the true relative residual ``||b - A x|| / ||b||``
is computed at the end. When it is above the tolerance and the iteration budget is not spent, the method is
restarted from the current iterate with a tighter tolerance.

:func:`direct_solve_dense` is the reference solver used to check the iterative one on small systems.

Both solvers return the unknowns with the pressure block at zero area weighted mean.
"""

__all__ = ['SolverError', 'SolveReport', 'solve_saddle', 'direct_solve_dense', 'solve_stokes',
           'DENSE_SIZE_LIMIT']

import dataclasses
import logging
import time
import warnings
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from ..assembly.assembler import BoundaryCompatibilityError, BoundaryData, SaddleSystem, Solution, lift_solution

_logger = logging.getLogger("swgstokes.Solver")

DENSE_SIZE_LIMIT = 5000
RHS_COMPATIBILITY = 1e-10
MAX_RESTARTS = 4


class SolverError(Exception):
    """Raised by the dense solver when the system is too large or singular beyond the constant pressure"""
    ...


@dataclasses.dataclass(frozen=True)
class SolveReport:
    iterations: int
    relative_residual: float
    converged: bool
    wall_time: float

    def __str__(self):
        state = "converged" if self.converged else "NOT converged"
        return (f"{state} in {self.iterations} iterations, relative residual {self.relative_residual:.3e}, "
                f"{self.wall_time:.3f}s")


def _weighted_pressure_shift(x: np.ndarray, n_velocity: int, areas: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=float)
    x[n_velocity:] -= np.dot(areas, x[n_velocity:]) / np.sum(areas)
    return x


def solve_saddle(system: SaddleSystem, tol: float = 1e-10, maxit: Optional[int] = None) -> Tuple[np.ndarray,
                                                                                                   SolveReport]:
    """
    Solves the system with the preconditioned minimum residual method.

    :param system: system to solve
    :type system: SaddleSystem
    :param tol: target of ||b - A x|| / ||b||
    :type tol: float
    :param maxit: iteration budget, 20 times the system size by default
    :type maxit: int
    :return: the vector of unknowns and the solve report. When the budget is spent before reaching the tolerance
        the last iterate is returned and the report has ``converged=False``.
    :raises BoundaryCompatibilityError: if the right hand side is not orthogonal to the constant pressure
    """
    start = time.perf_counter()
    size = system.size
    nv = system.n_velocity
    if maxit is None:
        maxit = 20 * size
    b = np.array(system.rhs, dtype=float)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        report = SolveReport(0, 0.0, True, time.perf_counter() - start)
        _logger.info("Zero right hand side, solution is zero")
        return np.zeros(size), report

    pressure_sum = float(np.sum(b[nv:]))
    if abs(pressure_sum) > RHS_COMPATIBILITY * b_norm * max(1.0, np.sqrt(system.n_pressure)):
        _logger.error("Right hand side has a component %.3e along the constant pressure", pressure_sum)
        raise BoundaryCompatibilityError(f"Right hand side not orthogonal to the constant pressure "
                                         f"(sum of the pressure rows {pressure_sum:.6e})")

    def project(x):
        x = np.array(x, dtype=float)
        if system.n_pressure:
            x[nv:] -= np.mean(x[nv:])
        return x

    matrix = system.matrix
    b = project(b)
    b_norm = np.linalg.norm(b)
    operator = spla.LinearOperator((size, size), matvec=lambda x: project(matrix @ project(x)), dtype=float)

    diagonal = np.abs(matrix.diagonal()[:nv])
    diagonal[diagonal == 0.0] = 1.0
    preconditioner_diagonal = np.concatenate((1.0 / diagonal, 1.0 / np.asarray(system.cell_areas, dtype=float)))
    preconditioner = spla.LinearOperator((size, size), matvec=lambda x: preconditioner_diagonal * np.ravel(x),
                                         dtype=float)

    iterations = 0

    def count(_xk):
        nonlocal iterations
        iterations += 1

    x = np.zeros(size)
    rtol = 0.01 * tol  # first pass aims two decades below tol
    relative_residual = np.inf
    for attempt in range(MAX_RESTARTS):
        budget = maxit - iterations
        if budget <= 0:
            break
        x, info = spla.minres(operator, b, x0=x, rtol=rtol, maxiter=budget, M=preconditioner, callback=count)
        x = project(x)
        relative_residual = float(np.linalg.norm(b - matrix @ x) / b_norm)
        _logger.debug("MINRES pass %d: info=%d, %d iterations, relative residual %.3e", attempt, info, iterations,
                      relative_residual)
        if relative_residual <= tol:
            break
        rtol *= 0.1

    x = _weighted_pressure_shift(x, nv, system.cell_areas)
    report = SolveReport(iterations, relative_residual, relative_residual <= tol, time.perf_counter() - start)
    if report.converged:
        _logger.info("Solve of size %d %s", size, report)
    else:
        _logger.warning("Solve of size %d %s (tol %.1e, maxit %d)", size, report, tol, maxit)
    return x, report


def direct_solve_dense(system: SaddleSystem) -> np.ndarray:
    """
    Reference solve with a dense symmetric factorization. The last pressure unknown is pinned to zero to remove the
    constant pressure, then the pressure is shifted to zero area weighted mean.

    :param system: system of size at most 5000
    :return: the vector of unknowns
    :raises SolverError: if the system is too large or singular once the pressure is pinned
    """
    size = system.size
    if size > DENSE_SIZE_LIMIT:
        raise SolverError(f"System of size {size} is too large for the dense solver (limit {DENSE_SIZE_LIMIT})")
    dense = system.matrix.toarray()
    keep = size - 1 if system.n_pressure else size
    reduced = dense[:keep, :keep]
    x = np.zeros(size)
    with warnings.catch_warnings():
        warnings.simplefilter('error', scipy.linalg.LinAlgWarning)
        try:
            x[:keep] = scipy.linalg.solve(reduced, system.rhs[:keep], assume_a='sym')
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError) as err:
            _logger.error("Dense solve failed: %s", err)
            raise SolverError(f"Singular system: {err}") from err
    residual = np.linalg.norm(dense @ x - system.rhs)
    scale = max(np.linalg.norm(system.rhs), np.finfo(float).tiny)
    if not np.all(np.isfinite(x)) or (residual > 1e-8 * scale and residual > 1e-12):
        raise SolverError(f"Dense solve left a residual of {residual:.3e}")
    return _weighted_pressure_shift(x, system.n_velocity, system.cell_areas)


def solve_stokes(system: SaddleSystem, bc: Optional[BoundaryData] = None, tol: float = 1e-10,
                 maxit: Optional[int] = None) -> Solution:
    """Solves the system and lifts the unknowns to a :class:`Solution` with the report attached"""
    raw, report = solve_saddle(system, tol, maxit)
    return lift_solution(system, raw, bc, report)

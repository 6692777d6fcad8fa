#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        solve_task.py
# Purpose:     One solve of a Stokes problem, runnable in its own thread
#
# Author:      swgstokes developers
#
# Created:     09-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Internal classes used by :class:`swgstokes.sim.study_runner.StudyRunner` and by the command line.
"""

__all__ = ['Problem', 'make_problem', 'RunResult', 'solve_on_mesh', 'build_mesh', 'SolveTask']

import dataclasses
import logging
import threading
import time
import traceback
from typing import Callable, Optional, Union

from ..analysis.error_norms import ErrorReport, compute_error_report
from ..analysis.exact_solutions import ExactSolution, cavity_boundary_data, get_case
from ..assembly.assembler import BoundaryData, SaddleSystem, Solution, assemble, lift_solution
from ..assembly.matrix_market import dump_system as write_system
from ..element.element_matrices import QuadratureModeError, QuadratureRule
from ..fdstencil.fd_scheme import build_fd_system
from ..mesh.mesh_factory import UNIT_SQUARE, Domain, build_perturbed_quad_mesh, build_uniform_rect_mesh
from ..mesh.polygonal_mesh import PolygonalMesh
from ..solver.saddle_solver import SolveReport, solve_saddle
from .run_config import SystemMode

_logger = logging.getLogger("swgstokes.RunTask")

END_LINE_TERM = '\n'


@dataclasses.dataclass(frozen=True)
class Problem:
    """A Stokes problem: domain, Dirichlet data, body force and, when known, the exact solution"""
    name: str
    domain: Domain
    boundary: Callable[[PolygonalMesh], BoundaryData]
    exact: Optional[ExactSolution] = None

    @property
    def forcing(self):
        return None if self.exact is None else self.exact.forcing


def make_problem(name: str) -> Problem:
    """
    Problem of a case name: 'case1', 'case2', 'patch' or 'cavity'.

    :raises KeyError: for unknown names
    """
    name = str(getattr(name, 'value', name))
    if name == 'cavity':
        return Problem('cavity', UNIT_SQUARE, cavity_boundary_data)
    exact = get_case(name)
    return Problem(name, exact.domain, lambda mesh: BoundaryData.from_function(mesh, exact.velocity), exact)


@dataclasses.dataclass(eq=False)
class RunResult:
    n: int
    mesh: PolygonalMesh
    system: SaddleSystem
    solution: Solution
    report: SolveReport
    errors: Optional[ErrorReport]
    wall_time: float

    @property
    def converged(self) -> bool:
        return self.report.converged


def build_mesh(domain: Domain, n: int, perturb: float = 0.0, seed: int = 0) -> PolygonalMesh:
    if perturb > 0:
        return build_perturbed_quad_mesh(n, domain, perturb, seed)
    return build_uniform_rect_mesh(n, domain)


def solve_on_mesh(mesh: PolygonalMesh, problem: Problem, *, kappa: float = 4.0,
                  mode: Union[str, SystemMode] = SystemMode.SWG,
                  rule: Union[str, QuadratureRule, None] = None, tol: float = 1e-10, maxit: Optional[int] = None,
                  dump_system: Optional[str] = None) -> RunResult:
    """
    Builds the system of a problem on a mesh, solves it and measures the errors when the exact solution is known.

    :param mesh: mesh. The fd mode needs a uniform grid of square cells.
    :param problem: problem to solve
    :param kappa: stabilization parameter
    :param mode: 'swg' assembles the element matrices, 'fd' builds the finite difference stencils
    :param rule: load quadrature. Defaults to 'poly-deg2' in the swg mode; the fd mode accepts only 'fd'.
    :param tol: solver tolerance
    :param maxit: solver iteration budget
    :param dump_system: when given, the system is written to this path in Matrix Market format
    :rtype: RunResult
    """
    start = time.perf_counter()
    mode = SystemMode(getattr(mode, 'value', mode))
    bc = problem.boundary(mesh)
    if mode is SystemMode.FD:
        if rule is not None and QuadratureRule.parse(rule) is not QuadratureRule.FD:
            raise QuadratureModeError(f"The fd mode only builds the 'fd' load, got {rule!r}")
        if mesh.grid is None:
            raise ValueError("The fd mode needs a mesh built on a rectangular grid")
        system = build_fd_system(mesh.grid.nx, kappa, problem.forcing, bc, mesh.grid.domain)
    else:
        system = assemble(mesh, kappa, problem.forcing, bc, rule if rule is not None else QuadratureRule.POLY_DEG2)
    if dump_system:
        write_system(system, dump_system)
    raw, report = solve_saddle(system, tol, maxit)
    solution = lift_solution(system, raw, bc, report)
    errors = None
    if problem.exact is not None:
        errors = compute_error_report(system.mesh, solution, problem.exact, kappa)
    n = mesh.grid.nx if mesh.grid is not None else int(round(mesh.n_cells ** 0.5))
    return RunResult(n, system.mesh, system, solution, report, errors, time.perf_counter() - start)


class SolveTask(threading.Thread):
    """One solve on an n x n mesh, run in its own thread. Used by the StudyRunner."""

    def __init__(self, runno: int, n: int, problem: Problem, *, kappa: float = 4.0, mode='swg', rule=None,
                 tol: float = 1e-10, maxit: Optional[int] = None, perturb: float = 0.0, seed: int = 0,
                 dump_system: Optional[str] = None, verbose=False):
        super().__init__(name=f"SolveTask#{runno}")
        self.runno = runno
        self.n = n
        self.problem = problem
        self.kappa = kappa
        self.mode = mode
        self.rule = rule
        self.tol = tol
        self.maxit = maxit
        self.perturb = perturb
        self.seed = seed
        self.dump_system = dump_system
        self.verbose = verbose
        self.start_time = None
        self.stop_time = None
        self.retcode = -1  # Signals an error by default
        self.result: Optional[RunResult] = None
        self.exception: Optional[BaseException] = None

    @property
    def elapsed_time(self) -> Optional[float]:
        """Wall time of the task in seconds, None until it finished"""
        if self.start_time is None or self.stop_time is None:
            return None
        return self.stop_time - self.start_time

    def print_info(self, logger_fun, message):
        message = f"SolveTask #{self.runno}: {message}"
        logger_fun(message)
        if self.verbose:
            print(f"{time.asctime()} {logger_fun.__name__}: {message}{END_LINE_TERM}")

    def run(self):
        self.start_time = time.time()
        self.print_info(_logger.info, f"Starting {self.problem.name} with n={self.n}, mode {self.mode}")
        try:
            mesh = build_mesh(self.problem.domain, self.n, self.perturb, self.seed)
            self.result = solve_on_mesh(mesh, self.problem, kappa=self.kappa, mode=self.mode, rule=self.rule,
                                        tol=self.tol, maxit=self.maxit, dump_system=self.dump_system)
        except Exception as err:
            self.exception = err
            self.stop_time = time.time()
            self.print_info(_logger.error, traceback.format_exc())
            return
        self.stop_time = time.time()
        if self.result.converged:
            self.retcode = 0
            self.print_info(_logger.info, f"Solve finished, {self.result.report}. "
                                          f"Time elapsed: {self.elapsed_time:.3f} s")
        else:
            self.retcode = 2
            self.print_info(_logger.warning, f"Solve did not converge, {self.result.report}. "
                                             f"Time elapsed: {self.elapsed_time:.3f} s")

    def get_results(self) -> Optional[RunResult]:
        """Returns the result once the task finished, None while it is running or if it failed"""
        if self.is_alive():
            return None
        return self.result

    def wait_results(self) -> Optional[RunResult]:
        self.join()
        return self.get_results()

#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        convergence.py
# Purpose:     Convergence tables of refinement studies
#
# Author:      swgstokes developers
#
# Created:     10-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Convergence tables. Each row holds the errors of one grid size and the observed order of each norm,
``r = log2(e(2h) / e(h))``, which is only defined when the grid size doubled from the previous row.
"""

__all__ = ['ConvergenceRow', 'ConvergenceTable', 'observed_orders', 'convergence_table', 'TABLE_NORMS']

import dataclasses
import logging
import math
from typing import List, Optional, Sequence

from ..solver.saddle_solver import SolveReport
from .error_norms import ErrorReport, divergence_limit

_logger = logging.getLogger("swgstokes.Analysis")

TABLE_NORMS = ('l2_u', 'h1_u', 'l2_v', 'h1_v', 'l2_p')
"""Norms of the short tables, in column order"""


@dataclasses.dataclass
class ConvergenceRow:
    n: int
    h: float
    errors: ErrorReport
    report: SolveReport
    divergence_limit: float = math.inf
    """Largest weak divergence accepted for the row, 10 tol max(|u|, |v|)"""


def observed_orders(ns: Sequence[int], errors: Sequence[Optional[float]]) -> List[Optional[float]]:
    """
    Observed orders between successive rows. The entry of a row is None when the previous row is not at half its
    grid size, or when an error is missing or zero.
    """
    orders: List[Optional[float]] = [None]
    for k in range(1, len(ns)):
        prev, cur = errors[k - 1], errors[k]
        if ns[k] == 2 * ns[k - 1] and prev and cur and prev > 0 and cur > 0:
            orders.append(math.log2(prev / cur))
        else:
            orders.append(None)
    return orders


@dataclasses.dataclass
class ConvergenceTable:
    case: str
    kappa: float
    mode: str
    rule: str
    rows: List[ConvergenceRow] = dataclasses.field(default_factory=list)

    @property
    def ns(self) -> List[int]:
        return [row.n for row in self.rows]

    def errors(self, norm: str) -> List[Optional[float]]:
        return [getattr(row.errors, norm) for row in self.rows]

    def orders(self, norm: str) -> List[Optional[float]]:
        return observed_orders(self.ns, self.errors(norm))

    @property
    def all_converged(self) -> bool:
        return all(row.report.converged for row in self.rows)

    def max_divergence(self) -> float:
        return max((row.errors.div_max or 0.0) for row in self.rows) if self.rows else 0.0


def convergence_table(case: str, ns: Sequence[int], kappa: float = 4.0, mode: str = 'fd', rule: Optional[str] = None,
                      tol: float = 1e-10, maxit: Optional[int] = None, perturb: float = 0.0, seed: int = 0,
                      parallel_runs: int = 1, verbose: bool = False,
                      dump_system: Optional[str] = None) -> ConvergenceTable:
    """
    Solves a case with an exact solution on each grid size and tabulates the errors.

    :param case: 'case1', 'case2' or 'patch'
    :param ns: strictly increasing grid sizes. Orders are computed between successive doublings.
    :param kappa: stabilization parameter
    :param mode: 'fd' or 'swg'
    :param rule: load quadrature of the swg mode, 'fd' by default in fd mode and 'poly-deg2' otherwise
    :param tol: solver tolerance
    :param maxit: solver iteration budget
    :param perturb: amplitude of the vertex perturbation (swg mode only)
    :param seed: perturbation seed
    :param parallel_runs: number of grid sizes solved at the same time
    :param verbose: echo task messages
    :param dump_system: when given, the system of the finest grid is written to this path in Matrix Market format
    :rtype: ConvergenceTable
    """
    from ..sim.solve_task import make_problem
    from ..sim.study_runner import StudyRunner

    ns = [int(n) for n in ns]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"Grid sizes must be strictly increasing, got {ns}")
    if rule is None:
        rule = 'fd' if mode == 'fd' else 'poly-deg2'
    problem = make_problem(case)
    if problem.exact is None:
        raise ValueError(f"Case {case!r} has no exact solution to compare with")

    runner = StudyRunner(parallel_runs=parallel_runs, verbose=verbose)
    for n in ns:
        runner.run(n, problem, kappa=kappa, mode=mode, rule=rule, tol=tol, maxit=maxit, perturb=perturb, seed=seed,
                   dump_system=dump_system if n == ns[-1] else None)
    runner.wait_completion()

    (x0, x1), _ = problem.domain
    table = ConvergenceTable(problem.name, float(kappa), str(getattr(mode, 'value', mode)),
                             str(getattr(rule, 'value', rule)))
    for result in runner.results():
        table.rows.append(ConvergenceRow(result.n, (x1 - x0) / result.n, result.errors, result.report,
                                         divergence_limit(result.solution, tol)))
    for norm in TABLE_NORMS:
        _logger.info("%s %s: errors %s, orders %s", problem.name, norm, table.errors(norm), table.orders(norm))
    return table

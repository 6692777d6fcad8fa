#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        study_runner.py
# Purpose:     Runs a batch of solves, a few at a time
#
# Author:      swgstokes developers
#
# Created:     10-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Runs a refinement study: one :class:`SolveTask` per grid size, with at most ``parallel_runs`` of them alive at the
same time. ::

    from swgstokes.sim import StudyRunner, make_problem

    runner = StudyRunner(parallel_runs=2)
    problem = make_problem('case2')
    for n in (8, 16, 32):
        runner.run(n, problem, mode='fd')
    runner.wait_completion()
    for result in runner.results():
        print(result.n, result.errors.l2_p)

The results are ordered by grid size, whatever order the tasks finished in.
"""

__all__ = ['StudyRunner']

import logging
from time import sleep
from typing import List, Optional

from .solve_task import Problem, RunResult, SolveTask

_logger = logging.getLogger("swgstokes.StudyRunner")


class StudyRunner(object):
    """
    Runs solve tasks in threads.

    :param parallel_runs: maximum number of tasks alive at the same time
    :type parallel_runs: int
    :param verbose: echo the task messages on stdout
    :type verbose: bool
    """

    def __init__(self, *, parallel_runs: int = 1, verbose=False):
        if parallel_runs < 1:
            raise ValueError("parallel_runs must be at least 1")
        self.parallel_runs = parallel_runs
        self.verbose = verbose
        self.active_tasks: List[SolveTask] = []
        self.completed_tasks: List[SolveTask] = []
        self.runno = 0  # number of total runs
        self.failed_runs = 0
        self.ok_runs = 0
        _logger.info("StudyRunner initialized")

    def run(self, n: int, problem: Problem, *, wait_resource: bool = True, **solve_options) -> SolveTask:
        """
        Starts the solve of a problem on an n x n grid.

        :param n: grid size
        :param problem: problem to solve
        :param wait_resource: when False the task starts even if ``parallel_runs`` tasks are already running
        :param solve_options: keyword arguments of :class:`SolveTask` (kappa, mode, rule, tol, maxit, perturb, seed,
            dump_system)
        :return: the task
        """
        while wait_resource and self.active_threads() >= self.parallel_runs:
            sleep(0.01)  # Give time for other solves to end
        self.runno += 1
        task = SolveTask(self.runno, n, problem, verbose=self.verbose, **solve_options)
        self.active_tasks.append(task)
        task.start()
        return task

    def active_threads(self) -> int:
        """Returns the number of active tasks"""
        self.update_completed()
        return len(self.active_tasks)

    def update_completed(self):
        """Moves the finished tasks from the active_tasks list to the completed_tasks list"""
        i = 0
        while i < len(self.active_tasks):
            if self.active_tasks[i].is_alive():
                i += 1
            else:
                task = self.active_tasks.pop(i)
                if task.retcode == 0:
                    self.ok_runs += 1
                else:
                    self.failed_runs += 1
                self.completed_tasks.append(task)

    def wait_completion(self, timeout: Optional[float] = None) -> bool:
        """
        Waits for all the tasks to finish.

        :param timeout: maximum time to wait on each task, in seconds. None waits forever.
        :returns: True if all the solves converged
        :rtype: bool
        """
        for task in list(self.active_tasks):
            task.join(timeout)
        self.update_completed()
        return self.failed_runs == 0 and not self.active_tasks

    def results(self) -> List[RunResult]:
        """
        Results of the completed tasks ordered by grid size.

        :raises Exception: the first exception raised by a task, in grid size order
        """
        self.update_completed()
        tasks = sorted(self.completed_tasks, key=lambda t: (t.n, t.runno))
        for task in tasks:
            if task.exception is not None:
                raise task.exception
        return [task.result for task in tasks]

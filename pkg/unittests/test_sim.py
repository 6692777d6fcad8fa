#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        test_sim.py
# Purpose:     Unit tests of the solve tasks and of the study runner
#
# Author:      swgstokes developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
@file:          test_sim.py
@date:          2026-10-17

@note           swgstokes runner unit test. Task bookkeeping, ordering of the results and failed solves.
                  run ./unittests/test_sim.py
"""

import os  # platform independent paths
import sys  # python path handling
import unittest  # performs test

sys.path.append(
    os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))  # add project root to lib search path
from swgstokes.element import QuadratureModeError
from swgstokes.sim import SolveTask, StudyRunner, make_problem


class test_solve_task(unittest.TestCase):
    """Single task"""

    def test_elapsed_time(self):
        task = SolveTask(1, 4, make_problem('patch'), mode='fd')
        self.assertIsNone(task.elapsed_time)
        task.start()
        task.join()
        self.assertEqual(task.retcode, 0)
        self.assertGreaterEqual(task.elapsed_time, 0.0)
        self.assertEqual(task.get_results().n, 4)


class test_study_runner(unittest.TestCase):
    """Runner bookkeeping"""

    def test_ordered_results(self):
        runner = StudyRunner(parallel_runs=2)
        problem = make_problem('case2')
        for n in (8, 4, 16):
            runner.run(n, problem, mode='fd')
        self.assertTrue(runner.wait_completion())
        self.assertEqual(runner.ok_runs, 3)
        self.assertEqual(runner.failed_runs, 0)
        self.assertEqual([result.n for result in runner.results()], [4, 8, 16])

    def test_not_converged(self):
        runner = StudyRunner()
        runner.run(8, make_problem('case2'), mode='fd', tol=1e-12, maxit=1)
        self.assertFalse(runner.wait_completion())
        self.assertEqual(runner.failed_runs, 1)
        self.assertEqual(runner.ok_runs, 0)
        result, = runner.results()
        self.assertFalse(result.converged)

    def test_failed_task(self):
        runner = StudyRunner()
        runner.run(4, make_problem('patch'), mode='fd', rule='simpson-mid')
        self.assertFalse(runner.wait_completion())
        self.assertEqual(runner.failed_runs, 1)
        with self.assertRaises(QuadratureModeError):
            runner.results()

    def test_parallel_runs(self):
        with self.assertRaises(ValueError):
            StudyRunner(parallel_runs=0)


if __name__ == '__main__':
    unittest.main()

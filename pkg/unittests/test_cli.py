#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        test_cli.py
# Purpose:     Unit tests of the swgstokes_run command
#
# Author:      swgstokes developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
@file:          test_cli.py
@date:          2026-09-19

@note           swgstokes command line unit test. Options, exit codes and the files written by each case.
                  run ./unittests/test_cli.py
"""

import contextlib
import csv
import io
import os  # platform independent paths
import sys  # python path handling
import tempfile
import unittest  # performs test

sys.path.append(
    os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))  # add project root to lib search path
from swgstokes.element import QuadratureModeError, QuadratureRule
from swgstokes.mesh import build_perturbed_quad_mesh, build_uniform_rect_mesh
from swgstokes.mesh.mesh_io import save_mesh
from swgstokes.scripts.swgstokes_run import (EXIT_CONFIG, EXIT_OK, main, parse_args)
from swgstokes.sim import make_problem, solve_on_mesh
from swgstokes.sim.run_config import CaseName, ConfigError, SystemMode


def run_quiet(argv):
    """Runs the command, returning the exit code and what it printed"""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def read_summary(path):
    with open(path, newline='', encoding='utf-8') as f:
        return {row[0]: row[1] for row in list(csv.reader(f))[1:]}


class test_parse_args(unittest.TestCase):
    """Options and their defaults"""

    def test_defaults(self):
        config = parse_args([])
        self.assertIs(config.case_name, CaseName.CASE1)
        self.assertEqual(config.n, 32)
        self.assertEqual(config.ns, (8, 16, 32, 64))
        self.assertEqual(config.kappa, 4.0)
        self.assertIs(config.system_mode, SystemMode.FD)
        self.assertIs(config.quadrature_rule, QuadratureRule.FD)
        self.assertEqual(config.tol, 1e-10)
        self.assertIsNone(config.maxit)

    def test_run_verb(self):
        config = parse_args(['run', '-c', 'cavity', '-n', '16', '--kappa', '2.5'])
        self.assertIs(config.case_name, CaseName.CAVITY)
        self.assertEqual(config.n, 16)
        self.assertEqual(config.kappa, 2.5)

    def test_swg_rule(self):
        config = parse_args(['--mode', 'swg', '--ns', '4,8,16', '--perturb', '0.1', '--seed', '3'])
        self.assertIs(config.quadrature_rule, QuadratureRule.POLY_DEG2)
        self.assertEqual(config.ns, (4, 8, 16))
        self.assertEqual(config.seed, 3)

    def test_invalid(self):
        for argv in (['-c', 'case9'],
                     ['--perturb', '0.1'],
                     ['-c', 'mesh-file', '--mode', 'swg'],
                     ['--unknown-option'],
                     ['run', 'extra'],
                     ['--ns', '8,x'],
                     ['--ns', '16,8'],
                     ['--kappa', '0'],
                     ['--mode', 'swg', '--rule', 'gauss'],
                     ['--mode', 'fd', '--rule', 'simpson-mid'],
                     ['--rule', 'poly-deg2'],
                     ['--mode', 'swg', '--perturb', '0.1', '--rule', 'simpson-mid']):
            with self.assertRaises(ConfigError, msg=' '.join(argv)):
                parse_args(argv)


class test_exit_codes(unittest.TestCase):
    """Invalid input ends with exit code 1 and a message"""

    def test_config_errors(self):
        with tempfile.TemporaryDirectory() as tmp:
            for argv in (['-c', 'case9'], ['--perturb', '0.1'], ['-c', 'mesh-file', '--mode', 'swg'],
                         ['--unknown-option'], ['run', 'extra']):
                with self.assertLogs('swgstokes.Cli', level='ERROR'):
                    code, _, err = run_quiet(argv + ['-o', tmp])
                self.assertEqual(code, EXIT_CONFIG, ' '.join(argv))
                self.assertIn("Error:", err)

    def test_fd_mode_rule(self):
        with tempfile.TemporaryDirectory() as tmp:
            for rule in ('simpson-mid', 'poly-deg2'):
                code, _, err = run_quiet(['-c', 'patch', '-n', '4', '--mode', 'fd', '--rule', rule, '-o', tmp])
                self.assertEqual(code, EXIT_CONFIG, rule)
                self.assertIn("'fd' rule", err)
            self.assertEqual(os.listdir(tmp), [])
        config = parse_args(['--mode', 'fd', '--rule', 'fd'])
        self.assertIs(config.quadrature_rule, QuadratureRule.FD)
        with self.assertRaises(QuadratureModeError):
            solve_on_mesh(build_uniform_rect_mesh(4), make_problem('patch'), mode='fd', rule='simpson-mid')

    def test_missing_mesh_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, _, _ = run_quiet(['-c', 'mesh-file', '--mode', 'swg', '--mesh', os.path.join(tmp, 'none.json'),
                                    '-o', tmp])
        self.assertEqual(code, EXIT_CONFIG)

    def test_broken_mesh_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'broken.json')
            with open(path, 'w', encoding='utf-8') as f:
                f.write('{"vertices": [[0, 0], [1, 0]], ')
            code, _, _ = run_quiet(['-c', 'mesh-file', '--mode', 'swg', '--mesh', path, '-o', tmp])
        self.assertEqual(code, EXIT_CONFIG)


class test_runs(unittest.TestCase):
    """Cases run end to end"""

    def test_patch(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, out, _ = run_quiet(['run', '-c', 'patch', '-n', '4', '-o', tmp])
            summary = read_summary(os.path.join(tmp, 'patch_n4.csv'))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("PASS", out)
        self.assertEqual(summary['status'], 'PASS')
        self.assertEqual(summary['converged'], '1')
        self.assertLessEqual(float(summary['max_trace_error']), 1e-9)

    def test_patch_swg_perturbed(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, _, _ = run_quiet(['-c', 'patch', '-n', '6', '--mode', 'swg', '--perturb', '0.2', '--seed', '5',
                                    '-o', tmp])
            summary = read_summary(os.path.join(tmp, 'patch_n6.csv'))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(summary['status'], 'PASS')

    def test_cavity(self):
        files = ('cavity_n32.vtk', 'cavity_n32_traces.csv', 'cavity_n32_summary.csv')
        contents = []
        with tempfile.TemporaryDirectory() as tmp:
            for sub in ('a', 'b'):
                out_dir = os.path.join(tmp, sub)
                code, _, _ = run_quiet(['-c', 'cavity', '-n', '32', '-o', out_dir])
                self.assertEqual(code, EXIT_OK)
                for name in files:
                    self.assertTrue(os.path.isfile(os.path.join(out_dir, name)), name)
                with open(os.path.join(out_dir, 'cavity_n32.vtk'), 'rb') as f:
                    contents.append(f.read())
            summary = read_summary(os.path.join(tmp, 'a', 'cavity_n32_summary.csv'))
        self.assertEqual(contents[0], contents[1])
        self.assertEqual(summary['status'], 'PASS')
        self.assertLessEqual(float(summary['divergence_residual']), 1e-8)
        self.assertLessEqual(float(summary['divergence_residual']), float(summary['divergence_limit']))
        # lid speed 1, default tolerance 1e-10
        self.assertAlmostEqual(float(summary['divergence_limit']), 1e-9, delta=1e-15)
        self.assertIn('symmetry_u', summary)

    def test_table(self):
        with tempfile.TemporaryDirectory() as tmp:
            code, out, _ = run_quiet(['-c', 'case2', '--ns', '4,8', '-o', tmp])
            self.assertTrue(os.path.isfile(os.path.join(tmp, 'case2_table_full.csv')))
            with open(os.path.join(tmp, 'case2_table.csv'), newline='', encoding='utf-8') as f:
                rows = list(csv.reader(f))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[1][0], '4')
        self.assertEqual(rows[1][2], '')
        self.assertNotEqual(rows[2][2], '')
        self.assertTrue(out.startswith(','.join(rows[0])))

    def test_mesh_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'quads.json')
            save_mesh(build_perturbed_quad_mesh(4, amplitude=0.15, seed=1), path)
            code, _, _ = run_quiet(['-c', 'mesh-file', '--mesh', path, '--mode', 'swg', '-o', tmp])
            for name in ('mesh_fields.vtk', 'mesh_traces.csv'):
                self.assertTrue(os.path.isfile(os.path.join(tmp, name)), name)
            summary = read_summary(os.path.join(tmp, 'mesh_patch.csv'))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(summary['status'], 'PASS')
        self.assertEqual(summary['cells'], '16')

    def test_dump_system(self):
        with tempfile.TemporaryDirectory() as tmp:
            dump = os.path.join(tmp, 'patch_system')
            code, _, _ = run_quiet(['-c', 'patch', '-n', '4', '-o', tmp, '--dump-system', dump])
            self.assertEqual(code, EXIT_OK)
            self.assertTrue(os.path.isfile(dump + '.mtx'))
            self.assertTrue(os.path.isfile(dump + '.rhs'))
            with open(dump + '.mtx', encoding='utf-8') as f:
                self.assertTrue(f.readline().startswith('%%MatrixMarket matrix coordinate real general'))


if __name__ == '__main__':
    unittest.main()

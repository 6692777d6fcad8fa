#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        swgstokes_run.py
# Purpose:     Command line interface of the Stokes solver
#
# Author:      swgstokes developers
#
# Created:     12-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Runs the numerical experiments of the solver from the command line.

.. code-block:: text

    swgstokes_run [run] [options]

    Options:
      -h, --help            show this help message and exit
      -c CASE, --case=CASE  case1, case2, cavity, patch or mesh-file. Default=case1
      -n N, --n=N           grid size of the cavity and patch runs. Default=32
      --ns=NS               comma separated grid sizes of a convergence table. Default=8,16,32,64
      -k KAPPA, --kappa=KAPPA
                            stabilization parameter. Default=4
      -m MODE, --mode=MODE  fd or swg. Default=fd
      -r RULE, --rule=RULE  load quadrature: poly-deg2, simpson-mid or fd
      --tol=TOL             relative residual of the solver. Default=1e-10
      --maxit=MAXIT         iteration budget of the solver. Default=20 times the system size
      --mesh=MESH           JSON mesh file of the mesh-file case
      --perturb=PERTURB     random displacement of the interior vertices, relative to h. Default=0
      --seed=SEED           seed of the displacements. Default=0
      -o OUT_DIR, --out-dir=OUT_DIR
                            output directory. Default=./swg_output
      --dump-system=DUMP_SYSTEM
                            writes the (finest) system in Matrix Market format
      -p PARALLEL_RUNS, --parallel=PARALLEL_RUNS
                            number of grid sizes solved at the same time. Default=1
      -v, --verbose         echo the progress on the console

Exit codes: 0 on success, 1 for invalid options or input files, 2 when a solve did not converge and 3 when a
validation (patch exactness, divergence or symmetry bound) failed.
"""

__all__ = ['main', 'run', 'parse_args', 'EXIT_OK', 'EXIT_CONFIG', 'EXIT_NOT_CONVERGED', 'EXIT_VALIDATION']

import logging
import pathlib
import sys
from optparse import OptionParser
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..analysis.convergence import TABLE_NORMS, convergence_table
from ..analysis.error_norms import divergence_limit, divergence_residual, mirror_symmetry_defect
from ..assembly.assembler import BoundaryCompatibilityError, DimensionMismatchError
from ..element.element_matrices import GeometryError, QuadratureModeError
from ..io.field_write import write_fields_vtk, write_summary, write_traces
from ..io.table_write import TABLE_HEADER, format_error, format_order, write_table_files
from ..mesh.mesh_factory import MeshGenerationError
from ..mesh.mesh_io import MeshParseError, load_mesh
from ..mesh.polygonal_mesh import MeshValidationError
from ..sim.run_config import CaseName, ConfigError, RunConfig
from ..sim.solve_task import RunResult, build_mesh, make_problem, solve_on_mesh
from ..solver.saddle_solver import SolverError

_logger = logging.getLogger("swgstokes.Cli")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2
EXIT_VALIDATION = 3

PATCH_TOLERANCE = 1e-9
CAVITY_SYMMETRY_LIMIT = 1e-7

INPUT_ERRORS = (ConfigError, MeshParseError, MeshValidationError, MeshGenerationError, GeometryError,
                QuadratureModeError, BoundaryCompatibilityError, DimensionMismatchError, SolverError, OSError)


class _OptionParser(OptionParser):
    """Reports option errors as ConfigError instead of exiting"""

    def error(self, msg):
        raise ConfigError(msg)


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(item) for item in text.split(',') if item.strip())
    except ValueError:
        raise ConfigError(f"Invalid list of grid sizes {text!r}")


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Builds a validated RunConfig out of the command line.

    :raises ConfigError: on unknown or invalid options
    """
    defaults = RunConfig()
    opts = _OptionParser(usage="usage: %prog [run] [options]")
    opts.add_option('-c', "--case", action="store", type="string", dest="case", default=defaults.case,
                    help="case1, case2, cavity, patch or mesh-file. Default=%default")
    opts.add_option('-n', "--n", action="store", type="int", dest="n", default=defaults.n,
                    help="grid size of the cavity and patch runs. Default=%default")
    opts.add_option("--ns", action="store", type="string", dest="ns",
                    default=','.join(str(n) for n in defaults.ns),
                    help="comma separated grid sizes of a convergence table. Default=%default")
    opts.add_option('-k', "--kappa", action="store", type="float", dest="kappa", default=defaults.kappa,
                    help="stabilization parameter. Default=%default")
    opts.add_option('-m', "--mode", action="store", type="string", dest="mode", default=defaults.mode,
                    help="fd or swg. Default=%default")
    opts.add_option('-r', "--rule", action="store", type="string", dest="rule", default=None,
                    help="load quadrature: poly-deg2, simpson-mid or fd")
    opts.add_option("--tol", action="store", type="float", dest="tol", default=defaults.tol,
                    help="relative residual of the solver. Default=%default")
    opts.add_option("--maxit", action="store", type="int", dest="maxit", default=None,
                    help="iteration budget of the solver. Default=20 times the system size")
    opts.add_option("--mesh", action="store", type="string", dest="mesh", default=None,
                    help="JSON mesh file of the mesh-file case")
    opts.add_option("--perturb", action="store", type="float", dest="perturb", default=defaults.perturb,
                    help="random displacement of the interior vertices, relative to h. Default=%default")
    opts.add_option("--seed", action="store", type="int", dest="seed", default=defaults.seed,
                    help="seed of the displacements. Default=%default")
    opts.add_option('-o', "--out-dir", action="store", type="string", dest="out_dir", default=defaults.out_dir,
                    help="output directory. Default=%default")
    opts.add_option("--dump-system", action="store", type="string", dest="dump_system", default=None,
                    help="writes the (finest) system in Matrix Market format")
    opts.add_option('-p', "--parallel", action="store", type="int", dest="parallel_runs",
                    default=defaults.parallel_runs,
                    help="number of grid sizes solved at the same time. Default=%default")
    opts.add_option('-v', "--verbose", action="store_true", dest="verbose", default=False,
                    help="echo the progress on the console")
    options, args = opts.parse_args(list(argv) if argv is not None else None)
    if args and args[0] == 'run':
        args = args[1:]
    if args:
        raise ConfigError(f"Unexpected arguments: {' '.join(args)}")
    config = RunConfig(case=options.case, n=options.n, ns=_int_list(options.ns), kappa=options.kappa,
                       mode=options.mode, rule=options.rule, tol=options.tol, maxit=options.maxit,
                       mesh=options.mesh, perturb=options.perturb, seed=options.seed, out_dir=options.out_dir,
                       dump_system=options.dump_system, parallel_runs=options.parallel_runs,
                       verbose=options.verbose)
    return config.validate()


def _run_table(config: RunConfig, out_dir: pathlib.Path) -> int:
    table = convergence_table(config.case_name.value, config.ns, config.kappa, config.system_mode.value,
                              config.quadrature_rule.value, config.tol, config.maxit, config.perturb, config.seed,
                              config.parallel_runs, config.verbose, config.dump_system)
    short, full = write_table_files(table, out_dir)

    print(','.join(TABLE_HEADER))
    columns = [(table.errors(norm), table.orders(norm)) for norm in TABLE_NORMS]
    for k, n in enumerate(table.ns):
        cells = [str(n)]
        for errors, orders in columns:
            cells += [format_error(errors[k]), format_order(orders[k])]
        print(','.join(cells))
    print(f"Tables written to {short} and {full}")

    if not table.all_converged:
        _logger.warning("Some solves of %s did not converge", table.case)
        return EXIT_NOT_CONVERGED
    for row in table.rows:
        limit = row.divergence_limit
        if row.errors.div_max is not None and row.errors.div_max > limit:
            _logger.error("n=%d: divergence residual %.3e above %.3e", row.n, row.errors.div_max, limit)
            return EXIT_VALIDATION
    return EXIT_OK


def _solve_single(config: RunConfig, problem_name: str, mesh=None) -> RunResult:
    problem = make_problem(problem_name)
    if mesh is None:
        mesh = build_mesh(problem.domain, config.n, config.perturb, config.seed)
    return solve_on_mesh(mesh, problem, kappa=config.kappa, mode=config.system_mode, rule=config.quadrature_rule,
                         tol=config.tol, maxit=config.maxit, dump_system=config.dump_system)


def _solver_summary(result: RunResult) -> Dict[str, object]:
    return {
        'n': result.n,
        'cells': result.mesh.n_cells,
        'edges': result.mesh.n_edges,
        'system_size': result.system.size,
        'iterations': result.report.iterations,
        'relative_residual': float(result.report.relative_residual),
        'converged': result.report.converged,
    }


def _run_cavity(config: RunConfig, out_dir: pathlib.Path) -> int:
    result = _solve_single(config, 'cavity')
    stem = f"cavity_n{result.n}"
    write_fields_vtk(result.mesh, result.solution, out_dir / f"{stem}.vtk", title=f"lid driven cavity n={result.n}")
    write_traces(result.mesh, result.solution, out_dir / f"{stem}_traces.csv")

    summary = _solver_summary(result)
    divergence = divergence_residual(result.mesh, result.solution)
    summary['divergence_residual'] = float(divergence)
    failures: List[str] = []
    limit = divergence_limit(result.solution, config.tol)
    summary['divergence_limit'] = limit
    if divergence > limit:
        failures.append(f"divergence residual {divergence:.3e} above {limit:.3e}")
    if result.mesh.grid is not None and result.mesh.grid.uniform:
        defects = mirror_symmetry_defect(result.mesh, result.solution)
        for name, value in zip(('symmetry_u', 'symmetry_v', 'symmetry_p'), defects):
            summary[name] = float(value)
            if value > CAVITY_SYMMETRY_LIMIT:
                failures.append(f"{name} defect {value:.3e} above {CAVITY_SYMMETRY_LIMIT:g}")
    summary['status'] = 'PASS' if not failures else 'FAIL'
    write_summary(summary, out_dir / f"{stem}_summary.csv")

    print(f"Cavity n={result.n}: {result.report}, divergence residual {divergence:.3e}")
    if not result.converged:
        return EXIT_NOT_CONVERGED
    if failures:
        for failure in failures:
            _logger.error("Cavity: %s", failure)
        return EXIT_VALIDATION
    return EXIT_OK


def _patch_check(result: RunResult, path: pathlib.Path) -> int:
    exact = make_problem('patch').exact
    xy = result.mesh.edge_midpoints
    trace_error = max(float(np.max(np.abs(result.solution.u - exact.u1(xy[:, 0], xy[:, 1])))),
                      float(np.max(np.abs(result.solution.v - exact.u2(xy[:, 0], xy[:, 1])))))
    pressure_error = float(np.max(np.abs(result.solution.p)))
    passed = trace_error <= PATCH_TOLERANCE and pressure_error <= PATCH_TOLERANCE
    summary = _solver_summary(result)
    summary['max_trace_error'] = trace_error
    summary['max_pressure_error'] = pressure_error
    summary['status'] = 'PASS' if passed else 'FAIL'
    write_summary(summary, path)
    print(f"Patch test n={result.n}: {summary['status']} (trace error {trace_error:.3e}, "
          f"pressure error {pressure_error:.3e})")
    if not result.converged:
        return EXIT_NOT_CONVERGED
    return EXIT_OK if passed else EXIT_VALIDATION


def _run_patch(config: RunConfig, out_dir: pathlib.Path) -> int:
    result = _solve_single(config, 'patch')
    return _patch_check(result, out_dir / f"patch_n{result.n}.csv")


def _run_mesh_file(config: RunConfig, out_dir: pathlib.Path) -> int:
    mesh = load_mesh(config.mesh)
    result = _solve_single(config, 'patch', mesh)
    write_fields_vtk(mesh, result.solution, out_dir / "mesh_fields.vtk", title=f"{pathlib.Path(config.mesh).name}")
    write_traces(mesh, result.solution, out_dir / "mesh_traces.csv")
    return _patch_check(result, out_dir / "mesh_patch.csv")


def run(config: RunConfig) -> int:
    """
    Runs a validated configuration and writes its artifacts in ``config.out_dir``.

    :return: exit code
    """
    out_dir = pathlib.Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    case = config.case_name
    _logger.info("Running %s, mode %s, kappa %g", case.value, config.system_mode.value, config.kappa)
    if case in (CaseName.CASE1, CaseName.CASE2):
        return _run_table(config, out_dir)
    if case is CaseName.CAVITY:
        return _run_cavity(config, out_dir)
    if case is CaseName.PATCH:
        return _run_patch(config, out_dir)
    return _run_mesh_file(config, out_dir)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``swgstokes_run`` script"""
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_args(argv)
        if config.verbose:
            logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s: %(message)s")
        return run(config)
    except INPUT_ERRORS as err:
        _logger.error("%s: %s", type(err).__name__, err)
        print(f"Error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

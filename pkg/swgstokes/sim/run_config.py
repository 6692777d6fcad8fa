#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        run_config.py
# Purpose:     Configuration of a solver run
#
# Author:      swgstokes developers
#
# Created:     09-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Options of a run, with their defaults. The command line fills a :class:`RunConfig` and the runners only read it.
"""

__all__ = ['ConfigError', 'CaseName', 'SystemMode', 'RunConfig']

import dataclasses
from enum import Enum
from typing import Optional, Tuple

from ..element.element_matrices import QuadratureModeError, QuadratureRule
from ..mesh.mesh_factory import MAX_PERTURBATION


class ConfigError(Exception):
    """Raised when the options of a run are invalid or inconsistent"""
    ...


class CaseName(str, Enum):
    CASE1 = 'case1'
    CASE2 = 'case2'
    CAVITY = 'cavity'
    PATCH = 'patch'
    MESH_FILE = 'mesh-file'


class SystemMode(str, Enum):
    SWG = 'swg'  # assembled from the element matrices
    FD = 'fd'  # built from the finite difference stencils


def _parse_enum(enum_class, value, what):
    try:
        return enum_class(value)
    except ValueError:
        raise ConfigError(f"Unknown {what} {value!r}. Valid values are {', '.join(e.value for e in enum_class)}")


@dataclasses.dataclass
class RunConfig:
    """
    :ivar case: case1, case2, cavity, patch or mesh-file
    :ivar n: grid size of the single solve runs (cavity, patch)
    :ivar ns: grid sizes of a convergence table
    :ivar kappa: stabilization parameter
    :ivar mode: 'fd' or 'swg'
    :ivar rule: load quadrature. None selects 'fd' for the fd mode and 'poly-deg2' otherwise.
    :ivar tol: relative residual target of the solver
    :ivar maxit: iteration budget of the solver, 20 times the system size when None
    :ivar mesh: mesh file of the mesh-file case
    :ivar perturb: amplitude of the random displacement of the interior vertices
    :ivar seed: seed of the displacement generator
    :ivar out_dir: output directory
    :ivar dump_system: path of the Matrix Market dump of the (last) system, if any
    :ivar parallel_runs: number of table rows solved at the same time
    :ivar verbose: echo task messages on stdout
    """
    case: str = 'case1'
    n: int = 32
    ns: Tuple[int, ...] = (8, 16, 32, 64)
    kappa: float = 4.0
    mode: str = 'fd'
    rule: Optional[str] = None
    tol: float = 1e-10
    maxit: Optional[int] = None
    mesh: Optional[str] = None
    perturb: float = 0.0
    seed: int = 0
    out_dir: str = './swg_output'
    dump_system: Optional[str] = None
    parallel_runs: int = 1
    verbose: bool = False

    @property
    def case_name(self) -> CaseName:
        return _parse_enum(CaseName, self.case, "case")

    @property
    def system_mode(self) -> SystemMode:
        return _parse_enum(SystemMode, self.mode, "mode")

    @property
    def quadrature_rule(self) -> QuadratureRule:
        if self.rule is None:
            return QuadratureRule.FD if self.system_mode is SystemMode.FD else QuadratureRule.POLY_DEG2
        try:
            return QuadratureRule.parse(self.rule)
        except QuadratureModeError as err:
            raise ConfigError(str(err))

    def validate(self) -> 'RunConfig':
        """
        Checks the options.

        :return: self, to allow chaining
        :raises ConfigError: on the first invalid or inconsistent option
        """
        case = self.case_name
        mode = self.system_mode
        rule = self.quadrature_rule
        if not self.kappa > 0:
            raise ConfigError(f"kappa must be positive, got {self.kappa!r}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol!r}")
        if self.maxit is not None and self.maxit < 1:
            raise ConfigError(f"maxit must be positive, got {self.maxit!r}")
        if self.n < 1:
            raise ConfigError(f"n must be positive, got {self.n!r}")
        if not self.ns or any(n < 1 for n in self.ns):
            raise ConfigError(f"ns must be a list of positive integers, got {self.ns!r}")
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ConfigError(f"ns must be strictly increasing, got {self.ns!r}")
        if not 0.0 <= self.perturb < MAX_PERTURBATION:
            raise ConfigError(f"perturb must be in [0, {MAX_PERTURBATION}), got {self.perturb!r}")
        if self.parallel_runs < 1:
            raise ConfigError(f"parallel_runs must be positive, got {self.parallel_runs!r}")
        if case is CaseName.MESH_FILE and not self.mesh:
            raise ConfigError("The mesh-file case needs a mesh file (--mesh)")
        if mode is SystemMode.FD and rule is not QuadratureRule.FD:
            raise ConfigError(f"The fd mode builds its load with the 'fd' rule, got '{rule.value}'")
        general_mesh = self.perturb > 0 or case is CaseName.MESH_FILE
        if general_mesh and mode is SystemMode.FD:
            raise ConfigError("The fd mode needs a uniform rectangular grid. Use --mode swg on perturbed or file "
                              "meshes")
        if general_mesh and rule is not QuadratureRule.POLY_DEG2:
            raise ConfigError(f"Quadrature rule '{rule.value}' needs rectangular cells")
        return self

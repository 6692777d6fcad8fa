#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        assembler.py
# Purpose:     Assembly of the global SWG saddle point system
#
# Author:      swgstokes developers
#
# Created:     04-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Global assembly of the SWG Stokes system::

    [ K   0   Q1 ] [ u ]   [ F1 ]
    [ 0   K   Q2 ] [ v ] = [ F2 ]
    [ Q1t Q2t 0  ] [ q ]   [ G  ]

``Q1`` and ``Q2`` hold ``|e| n_x`` and ``|e| n_y`` so the last block row is the net flux of each cell. The momentum
equation couples the velocity with ``-p``, hence the pressure block of the unknown vector is ``q = -p``.
:func:`lift_solution` turns it back into the pressure.

Dirichlet data are eliminated: the columns of the boundary edges are moved to the right hand side and the
boundary edges get no unknown. The constant pressure remains in the kernel of the matrix; it is removed by the
solver and by :func:`lift_solution`.

Contributions are accumulated as (row, col, value) triplets that are sorted before being summed, so the result is
exactly symmetric and doesn't depend on the order in which the cells are visited.
"""

__all__ = ['BoundaryCompatibilityError', 'DimensionMismatchError', 'BoundaryData', 'SaddleSystem', 'Solution',
           'assemble', 'lift_solution', 'accumulate_matrix', 'accumulate_vector', 'COMPATIBILITY_TOLERANCE']

import dataclasses
import logging
from typing import Any, Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..element.element_matrices import QuadratureRule, element_geometry, element_matrices
from ..mesh.polygonal_mesh import PolygonalMesh
from .dof_map import DofMap, number_dofs

_logger = logging.getLogger("swgstokes.Assembly")

COMPATIBILITY_TOLERANCE = 1e-10
"""Largest accepted net boundary flux, relative to the boundary length"""

ScalarField = Callable[[np.ndarray, np.ndarray], np.ndarray]
VectorField = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


class BoundaryCompatibilityError(Exception):
    """Raised when the Dirichlet data have a net flux through the boundary, which no divergence free field can
    match"""
    ...


class DimensionMismatchError(Exception):
    """Raised when two systems or a system and a vector don't have matching dimensions"""
    ...


@dataclasses.dataclass(frozen=True, eq=False)
class BoundaryData:
    """Dirichlet velocity values, one pair per edge. Only the values on boundary edges are used."""
    g_u: np.ndarray
    g_v: np.ndarray

    @classmethod
    def homogeneous(cls, mesh: PolygonalMesh) -> 'BoundaryData':
        return cls(np.zeros(mesh.n_edges), np.zeros(mesh.n_edges))

    @classmethod
    def from_function(cls, mesh: PolygonalMesh, g: VectorField) -> 'BoundaryData':
        """Evaluates g at the boundary edge midpoints. Interior edges get 0."""
        g_u = np.zeros(mesh.n_edges)
        g_v = np.zeros(mesh.n_edges)
        boundary = np.array(mesh.boundary_edges, dtype=int)
        if len(boundary):
            mid = mesh.edge_midpoints[boundary]
            gu, gv = g(mid[:, 0], mid[:, 1])
            g_u[boundary] = np.broadcast_to(np.asarray(gu, dtype=float), len(boundary))
            g_v[boundary] = np.broadcast_to(np.asarray(gv, dtype=float), len(boundary))
        return cls(g_u, g_v)

    def net_flux(self, mesh: PolygonalMesh) -> float:
        """sum over the boundary edges of (g . n) |e|, with n the outward normal"""
        flux = []
        for e in mesh.boundary_edges:
            edge = mesh.edges[e]
            nx, ny = mesh.outward_normal(edge.incident_cells[0], e)
            flux.append((self.g_u[e] * nx + self.g_v[e] * ny) * edge.length)
        return float(np.sum(np.sort(flux))) if flux else 0.0


@dataclasses.dataclass(frozen=True, eq=False)
class SaddleSystem:
    """
    Assembled saddle point system. The matrix is a CSR matrix with sorted indices and the unknowns are numbered by
    ``dof_map``. ``mode`` is 'swg' for the assembled system and 'fd' for the finite difference one.
    """
    matrix: sp.csr_matrix
    rhs: np.ndarray
    dof_map: DofMap
    cell_areas: np.ndarray
    kappa: float
    rule: str
    mode: str = 'swg'
    mesh: Optional[PolygonalMesh] = None

    @property
    def n_velocity(self) -> int:
        return self.dof_map.n_velocity

    @property
    def n_pressure(self) -> int:
        return self.dof_map.n_pressure

    @property
    def size(self) -> int:
        return self.dof_map.size

    @property
    def pressure_slice(self) -> slice:
        return slice(self.n_velocity, self.size)

    def nullspace_vector(self) -> np.ndarray:
        """(0, 0, 1): the constant pressure"""
        z = np.zeros(self.size)
        z[self.pressure_slice] = 1.0
        return z

    def velocity_block(self) -> sp.csr_matrix:
        return self.matrix[:self.n_velocity, :self.n_velocity]

    def replace(self, **changes) -> 'SaddleSystem':
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(eq=False)
class Solution:
    """
    Discrete solution on a mesh: ``u`` and ``v`` hold one trace value per edge (boundary edges carry the Dirichlet
    data), ``p`` one value per cell with zero area weighted mean.
    """
    u: np.ndarray
    v: np.ndarray
    p: np.ndarray
    report: Optional[Any] = None


def accumulate_matrix(rows, cols, vals, shape) -> sp.csr_matrix:
    """
    Sums the triplets with equal (row, col). The triplets are sorted by (row, col, value) before the sum, so the
    result only depends on the multiset of triplets.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=float)
    if len(vals) == 0:
        return sp.csr_matrix(shape, dtype=float)
    order = np.lexsort((vals, cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    starts = np.flatnonzero(np.r_[True, (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])])
    sums = np.add.reduceat(vals, starts)
    matrix = sp.csr_matrix((sums, (rows[starts], cols[starts])), shape=shape)
    matrix.sort_indices()
    return matrix


def accumulate_vector(rows, vals, size: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    vals = np.asarray(vals, dtype=float)
    out = np.zeros(size)
    if len(vals) == 0:
        return out
    order = np.lexsort((vals, rows))
    rows, vals = rows[order], vals[order]
    starts = np.flatnonzero(np.r_[True, rows[1:] != rows[:-1]])
    out[rows[starts]] = np.add.reduceat(vals, starts)
    return out


def _concat(chunks, dtype) -> np.ndarray:
    return np.concatenate(chunks).astype(dtype) if chunks else np.zeros(0, dtype=dtype)


def _check_compatibility(mesh: PolygonalMesh, bc: BoundaryData):
    boundary_length = float(np.sum(mesh.edge_lengths[list(mesh.boundary_edges)])) if mesh.boundary_edges else 0.0
    flux = bc.net_flux(mesh)
    limit = COMPATIBILITY_TOLERANCE * boundary_length
    if abs(flux) > limit:
        _logger.error("Boundary data have a net flux of %.3e (limit %.3e)", flux, limit)
        raise BoundaryCompatibilityError(f"Net boundary flux {flux:.6e} exceeds {limit:.3e}")
    if flux != 0.0:
        _logger.debug("Net boundary flux %.3e", flux)


def assemble(mesh: PolygonalMesh, kappa: float = 4.0,
             f: Optional[Sequence[Optional[ScalarField]]] = None,
             bc: Optional[BoundaryData] = None,
             rule: Union[str, QuadratureRule] = QuadratureRule.POLY_DEG2) -> SaddleSystem:
    """
    Assembles the global SWG system of a mesh.

    :param mesh: the mesh
    :type mesh: PolygonalMesh
    :param kappa: stabilization parameter, positive
    :type kappa: float
    :param f: pair (f1, f2) of body force components, each called with arrays of x and y. None means no force.
    :param bc: Dirichlet data. Homogeneous when omitted.
    :type bc: BoundaryData
    :param rule: load vector quadrature
    :return: the assembled system
    :rtype: SaddleSystem
    :raises BoundaryCompatibilityError: when the Dirichlet data have a net flux
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    rule = QuadratureRule.parse(rule)
    f1, f2 = (None, None) if f is None else f
    if bc is None:
        bc = BoundaryData.homogeneous(mesh)
    if len(bc.g_u) != mesh.n_edges or len(bc.g_v) != mesh.n_edges:
        raise DimensionMismatchError(f"Boundary data cover {len(bc.g_u)} edges, the mesh has {mesh.n_edges}")
    _check_compatibility(mesh, bc)

    dofs = number_dofs(mesh)
    rows, cols, vals = [], [], []
    rhs_rows, rhs_vals = [], []

    for cell in mesh.cells:
        em = element_matrices(element_geometry(cell, mesh), kappa, f1, f2, rule)
        k = em.K
        edges = np.array(cell.edges, dtype=int)
        ud = dofs.u_dofs[edges]
        vd = dofs.v_dofs[edges]
        p = dofs.p_dof(cell.id)
        free = ud >= 0
        fixed = ~free
        gu = bc.g_u[edges]
        gv = bc.g_v[edges]

        # velocity blocks, same K for both components
        kff = k[np.ix_(free, free)]
        for comp in (ud[free], vd[free]):
            rows.append(np.repeat(comp, len(comp)))
            cols.append(np.tile(comp, len(comp)))
            vals.append(kff.ravel())

        # divergence coupling, both triangles of the matrix
        for comp, q in ((ud[free], em.Q1[free]), (vd[free], em.Q2[free])):
            rows.append(comp)
            cols.append(np.full(len(comp), p))
            vals.append(q)
            rows.append(np.full(len(comp), p))
            cols.append(comp)
            vals.append(q)

        rhs_rows.extend((ud[free], vd[free]))
        rhs_vals.extend((em.F1[free], em.F2[free]))
        if fixed.any():
            kfb = k[np.ix_(free, fixed)]
            rhs_rows.extend((ud[free], vd[free]))
            rhs_vals.extend((-(kfb @ gu[fixed]), -(kfb @ gv[fixed])))
            rhs_rows.append(np.array([p]))
            rhs_vals.append(np.array([-(np.dot(em.Q1[fixed], gu[fixed]) + np.dot(em.Q2[fixed], gv[fixed]))]))

    size = dofs.size
    matrix = accumulate_matrix(_concat(rows, int), _concat(cols, int), _concat(vals, float), (size, size))
    rhs = accumulate_vector(_concat(rhs_rows, int), _concat(rhs_vals, float), size)
    _logger.info("SWG system assembled: %d velocity and %d pressure unknowns, %d non zeros (kappa=%g, rule=%s)",
                 dofs.n_velocity, dofs.n_pressure, matrix.nnz, kappa, rule.value)
    return SaddleSystem(matrix, rhs, dofs, mesh.cell_areas, float(kappa), rule.value, 'swg', mesh)


def lift_solution(system: SaddleSystem, raw, bc: Optional[BoundaryData] = None, report=None) -> Solution:
    """
    Builds the solution on the whole mesh from the vector of unknowns.

    Boundary edges get the Dirichlet values, the pressure is recovered from the pressure block of the unknowns and
    shifted so that ``sum_T |T| p_T = 0``.

    :param system: the system that was solved
    :param raw: vector of unknowns
    :param bc: the Dirichlet data used to build the system. Homogeneous when omitted.
    :param report: solver report to attach to the solution
    :rtype: Solution
    :raises DimensionMismatchError: if the vector doesn't match the system
    """
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (system.size,):
        raise DimensionMismatchError(f"Vector of size {raw.size} given for a system of size {system.size}")
    dofs = system.dof_map
    n_edges = len(dofs.u_dofs)
    if bc is None:
        g_u = np.zeros(n_edges)
        g_v = np.zeros(n_edges)
    else:
        if len(bc.g_u) != n_edges:
            raise DimensionMismatchError(f"Boundary data cover {len(bc.g_u)} edges, the system has {n_edges}")
        g_u, g_v = bc.g_u, bc.g_v
    interior = dofs.interior_edges
    u = np.array(g_u, dtype=float)
    v = np.array(g_v, dtype=float)
    u[interior] = raw[dofs.u_dofs[interior]]
    v[interior] = raw[dofs.v_dofs[interior]]
    p = -raw[system.pressure_slice]
    areas = system.cell_areas
    p = p - np.dot(areas, p) / np.sum(areas)
    return Solution(u, v, p, report)

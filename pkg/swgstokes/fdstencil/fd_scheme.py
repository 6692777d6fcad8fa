#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        fd_scheme.py
# Purpose:     5 and 7 point finite difference Stokes systems on uniform grids
#
# Author:      swgstokes developers
#
# Created:     06-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Finite difference form of the SWG scheme on a uniform grid of square cells.

The unknowns are the velocity components at the edge midpoints and the pressure at the cell centers. Each velocity
equation couples an edge midpoint with its six neighbours::

    vertical edge (i, j), between the cells (i-1, j) and (i, j)

        c4 H(i-1, j+1)        c4 H(i, j+1)
    c3 V(i-1, j)      c2 V(i, j)      c1 V(i+1, j)
        c4 H(i-1, j)          c4 H(i, j)

with ``c1 = c3 = kappa/4 - 1``, ``c2 = kappa/2 + 2`` and ``c4 = -kappa/4``. Horizontal edges use the same stencil
rotated by 90 degrees. For kappa = 4 the weights c1 and c3 vanish and the 5 point scheme is obtained.

The right hand side of the velocity equations is ``h^2/2 f`` at the edge midpoint. The u equation of a vertical
edge and the v equation of a horizontal edge also hold the pressure difference ``h (q_right - q_left)``, and the
continuity equation of a cell reads::

    h (u(i+1/2, j) - u(i-1/2, j)) + h (v(i, j+1/2) - v(i, j-1/2)) = 0

The rows are kept in this form, not divided by h^2 and h, so they can be compared directly with the assembled SWG
system built with the 'fd' quadrature rule. Use :func:`normalized_fd_rows` to get the usual display form.
"""

__all__ = ['StencilWeights', 'stencil_weights', 'GridIndexer', 'build_fd_system', 'check_equivalence',
           'normalized_fd_rows']

import dataclasses
import logging
import math
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from ..assembly.assembler import (BoundaryData, DimensionMismatchError, SaddleSystem, _check_compatibility,
                                  accumulate_matrix, accumulate_vector)
from ..assembly.dof_map import number_dofs
from ..mesh.mesh_factory import UNIT_SQUARE, Domain, build_uniform_rect_mesh
from ..mesh.polygonal_mesh import PolygonalMesh

_logger = logging.getLogger("swgstokes.FdStencil")


@dataclasses.dataclass(frozen=True)
class StencilWeights:
    c1: float
    c2: float
    c3: float
    c4: float

    @property
    def seven_point(self) -> Tuple[float, ...]:
        """(c1, c2, c3, c4, c4, c4, c4)"""
        return self.c1, self.c2, self.c3, self.c4, self.c4, self.c4, self.c4

    @property
    def row_sum(self) -> float:
        return self.c1 + self.c2 + self.c3 + 4 * self.c4


def stencil_weights(kappa: float) -> StencilWeights:
    """
    Weights of the velocity stencil.

    :param kappa: stabilization parameter, positive
    :return: c1 = c3 = kappa/4 - 1, c2 = kappa/2 + 2, c4 = -kappa/4
    :rtype: StencilWeights
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    return StencilWeights(kappa / 4 - 1, kappa / 2 + 2, kappa / 4 - 1, -kappa / 4)


class GridIndexer(object):
    """
    Maps grid indices to mesh edges, cells and unknowns of a uniform rectangular mesh.

    ``vertical(i, j)`` is the edge on x = x_i spanning [y_j, y_j+1] (0 <= i <= n, 0 <= j < n) and
    ``horizontal(i, j)`` the edge on y = y_j spanning [x_i, x_i+1] (0 <= i < n, 0 <= j <= n). Cell (i, j) is the
    square [x_i, x_i+1] x [y_j, y_j+1]. The unknowns follow :func:`swgstokes.assembly.number_dofs` on the same mesh.

    :param mesh: mesh built by a rectangular generator
    :type mesh: PolygonalMesh
    """

    def __init__(self, mesh: PolygonalMesh):
        if mesh.grid is None:
            raise ValueError("The mesh has no rectangular grid structure")
        self.mesh = mesh
        self.nx = mesh.grid.nx
        self.ny = mesh.grid.ny
        self.dof_map = number_dofs(mesh)
        by_endpoints = {edge.endpoints: edge.id for edge in mesh.edges}
        row = self.nx + 1
        self._vertical = np.empty((self.nx + 1, self.ny), dtype=int)
        self._horizontal = np.empty((self.nx, self.ny + 1), dtype=int)
        for j in range(self.ny):
            for i in range(self.nx + 1):
                self._vertical[i, j] = by_endpoints[(j * row + i, (j + 1) * row + i)]
        for j in range(self.ny + 1):
            for i in range(self.nx):
                self._horizontal[i, j] = by_endpoints[(j * row + i, j * row + i + 1)]

    @property
    def n(self) -> int:
        return self.nx

    def vertical(self, i: int, j: int) -> int:
        return int(self._vertical[i, j])

    def horizontal(self, i: int, j: int) -> int:
        return int(self._horizontal[i, j])

    def cell(self, i: int, j: int) -> int:
        return j * self.nx + i

    def u(self, edge_id: int) -> int:
        return int(self.dof_map.u_dofs[edge_id])

    def v(self, edge_id: int) -> int:
        return int(self.dof_map.v_dofs[edge_id])

    def p(self, i: int, j: int) -> int:
        return self.dof_map.p_dof(self.cell(i, j))

    def edge_ids(self) -> np.ndarray:
        """All the edges reached by the grid indices, vertical ones first"""
        return np.concatenate((self._vertical.ravel(), self._horizontal.ravel()))


def build_fd_system(n: int, kappa: float = 4.0, f: Optional[Sequence[Optional[Callable]]] = None,
                    bc: Union[BoundaryData, Callable, None] = None, domain: Domain = UNIT_SQUARE) -> SaddleSystem:
    """
    Builds the finite difference system directly from the stencils.

    :param n: number of cells along each axis
    :param kappa: stabilization parameter, positive. kappa = 4 gives the 5 point scheme.
    :param f: pair (f1, f2) of body force components. None means no force.
    :param bc: Dirichlet data, either as :class:`BoundaryData` on the uniform mesh or as a function returning
        (u, v) at given x and y. Homogeneous when omitted.
    :param domain: square domain ((x0, x1), (y0, y1))
    :return: system numbered like the SWG system of the same mesh
    :rtype: SaddleSystem
    """
    weights = stencil_weights(kappa)
    mesh = build_uniform_rect_mesh(n, domain)
    grid = mesh.grid
    if not math.isclose(grid.hx, grid.hy, rel_tol=1e-12):
        raise ValueError(f"The finite difference scheme needs square cells, got hx={grid.hx!r} hy={grid.hy!r}")
    h = grid.hx
    if bc is None:
        bc = BoundaryData.homogeneous(mesh)
    elif not isinstance(bc, BoundaryData):
        bc = BoundaryData.from_function(mesh, bc)
    _check_compatibility(mesh, bc)
    f1, f2 = (None, None) if f is None else f
    idx = GridIndexer(mesh)
    dofs = idx.dof_map
    midpoints = mesh.edge_midpoints

    rows, cols, vals = [], [], []
    rhs_rows, rhs_vals = [], []

    def load(field, edge_id):
        if field is None:
            return 0.0
        x, y = midpoints[edge_id]
        return 0.5 * h * h * float(np.asarray(field(np.array([x]), np.array([y])), dtype=float).ravel()[0])

    def couple(component, row, edge_id, coefficient):
        dof = component[edge_id]
        if dof >= 0:
            rows.append(row)
            cols.append(dof)
            vals.append(coefficient)
        else:
            g = bc.g_u if component is dofs.u_dofs else bc.g_v
            rhs_rows.append(row)
            rhs_vals.append(-coefficient * g[edge_id])

    def velocity_rows(edge_id, neighbours, pressure):
        for component, field, coupled in ((dofs.u_dofs, f1, pressure[0]), (dofs.v_dofs, f2, pressure[1])):
            row = component[edge_id]
            couple(component, row, edge_id, weights.c2)
            for neighbour, coefficient in neighbours:
                couple(component, row, neighbour, coefficient)
            for cell, coefficient in coupled:
                rows.append(row)
                cols.append(dofs.p_dof(cell))
                vals.append(coefficient)
            rhs_rows.append(row)
            rhs_vals.append(load(field, edge_id))

    for j in range(n):
        for i in range(1, n):
            # vertical edge between cells (i-1, j) and (i, j)
            neighbours = ((idx.vertical(i + 1, j), weights.c1), (idx.vertical(i - 1, j), weights.c3),
                          (idx.horizontal(i - 1, j), weights.c4), (idx.horizontal(i - 1, j + 1), weights.c4),
                          (idx.horizontal(i, j), weights.c4), (idx.horizontal(i, j + 1), weights.c4))
            pressure = (((idx.cell(i, j), -h), (idx.cell(i - 1, j), h)), ())
            velocity_rows(idx.vertical(i, j), neighbours, pressure)
    for j in range(1, n):
        for i in range(n):
            # horizontal edge between cells (i, j-1) and (i, j)
            neighbours = ((idx.horizontal(i, j + 1), weights.c1), (idx.horizontal(i, j - 1), weights.c3),
                          (idx.vertical(i, j - 1), weights.c4), (idx.vertical(i + 1, j - 1), weights.c4),
                          (idx.vertical(i, j), weights.c4), (idx.vertical(i + 1, j), weights.c4))
            pressure = ((), ((idx.cell(i, j), -h), (idx.cell(i, j - 1), h)))
            velocity_rows(idx.horizontal(i, j), neighbours, pressure)

    for j in range(n):
        for i in range(n):
            row = idx.p(i, j)
            for component, edge_id, coefficient in ((dofs.u_dofs, idx.vertical(i + 1, j), h),
                                                    (dofs.u_dofs, idx.vertical(i, j), -h),
                                                    (dofs.v_dofs, idx.horizontal(i, j + 1), h),
                                                    (dofs.v_dofs, idx.horizontal(i, j), -h)):
                couple(component, row, edge_id, coefficient)

    size = dofs.size
    matrix = accumulate_matrix(np.array(rows, dtype=int), np.array(cols, dtype=int), np.array(vals, dtype=float),
                               (size, size))
    rhs = accumulate_vector(np.array(rhs_rows, dtype=int), np.array(rhs_vals, dtype=float), size)
    _logger.info("FD system built: n=%d, kappa=%g, weights %s, size %d", n, kappa, weights.seven_point, size)
    return SaddleSystem(matrix, rhs, dofs, mesh.cell_areas, float(kappa), 'fd', 'fd', mesh)


def check_equivalence(swg: SaddleSystem, fd: SaddleSystem) -> float:
    """
    Largest entrywise difference between two systems, matrix and right hand side together.

    :param swg: assembled SWG system, built with the 'fd' rule for an exact match
    :param fd: finite difference system on the same grid
    :return: max |difference|
    :raises DimensionMismatchError: if the systems don't have the same layout
    """
    if swg.matrix.shape != fd.matrix.shape or swg.rhs.shape != fd.rhs.shape or \
            swg.n_velocity != fd.n_velocity:
        raise DimensionMismatchError(f"Systems of shape {swg.matrix.shape} and {fd.matrix.shape} can't be compared")
    diff = (sp.csr_matrix(swg.matrix) - sp.csr_matrix(fd.matrix)).tocoo()
    matrix_gap = float(np.max(np.abs(diff.data))) if diff.nnz else 0.0
    rhs_gap = float(np.max(np.abs(swg.rhs - fd.rhs))) if swg.rhs.size else 0.0
    _logger.debug("Equivalence check: matrix %.3e, rhs %.3e", matrix_gap, rhs_gap)
    return max(matrix_gap, rhs_gap)


def normalized_fd_rows(system: SaddleSystem, h: float) -> Tuple[sp.csr_matrix, np.ndarray]:
    """
    Divides the velocity rows by h^2 and the continuity rows by h. For kappa = 4 the velocity rows then read
    (4, -1, -1, -1, -1) / h^2.

    :return: scaled matrix and right hand side
    """
    scale = np.concatenate((np.full(system.n_velocity, 1.0 / (h * h)), np.full(system.n_pressure, 1.0 / h)))
    matrix = sp.csr_matrix(sp.diags(scale) @ system.matrix)
    return matrix, scale * system.rhs

#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        dof_map.py
# Purpose:     Global numbering of the velocity and pressure unknowns
#
# Author:      swgstokes developers
#
# Created:     04-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Numbering of the unknowns. Velocity unknowns live on interior edges, pressure unknowns on cells::

    [ u of interior edges | v of interior edges | p of cells ]

Interior edges are taken in mesh edge order. Boundary edges carry Dirichlet data and have no unknown.
"""
import dataclasses

import numpy as np

from ..mesh.polygonal_mesh import PolygonalMesh

__all__ = ['DofMap', 'number_dofs']


@dataclasses.dataclass(frozen=True, eq=False)
class DofMap:
    u_dofs: np.ndarray
    """u unknown of each edge, -1 on boundary edges"""
    v_dofs: np.ndarray
    """v unknown of each edge, -1 on boundary edges"""
    interior_edges: np.ndarray
    boundary_edges: np.ndarray
    n_cells: int

    @property
    def n_interior(self) -> int:
        return len(self.interior_edges)

    @property
    def n_velocity(self) -> int:
        """Number of velocity unknowns, both components"""
        return 2 * self.n_interior

    @property
    def n_pressure(self) -> int:
        return self.n_cells

    @property
    def size(self) -> int:
        return self.n_velocity + self.n_pressure

    def p_dof(self, cell_id: int) -> int:
        return self.n_velocity + cell_id

    @property
    def p_dofs(self) -> np.ndarray:
        return self.n_velocity + np.arange(self.n_cells)

    def is_constrained(self, edge_id: int) -> bool:
        return self.u_dofs[edge_id] < 0


def number_dofs(mesh: PolygonalMesh) -> DofMap:
    """
    Numbers the unknowns of a mesh. The numbering only depends on the mesh edge order.

    :param mesh: the mesh
    :type mesh: PolygonalMesh
    :return: the numbering
    :rtype: DofMap
    """
    interior = np.array(mesh.interior_edges, dtype=int)
    boundary = np.array(mesh.boundary_edges, dtype=int)
    u_dofs = np.full(mesh.n_edges, -1, dtype=int)
    v_dofs = np.full(mesh.n_edges, -1, dtype=int)
    u_dofs[interior] = np.arange(len(interior))
    v_dofs[interior] = len(interior) + np.arange(len(interior))
    return DofMap(u_dofs, v_dofs, interior, boundary, mesh.n_cells)

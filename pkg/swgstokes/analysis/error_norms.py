#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        error_norms.py
# Purpose:     Discrete error norms and diagnostics of SWG solutions
#
# Author:      swgstokes developers
#
# Created:     08-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Error norms.

Grid norms, only defined on uniform rectangular meshes with steps hx and hy::

    ||w_b - w||_0^2 = sum over all edges       hx hy |w_e - w(M_e)|^2
    ||w_b - w||_1^2 = sum over the cells       hx hy (|(w_r - w_l)/hx - w_x(c)|^2 + |(w_t - w_b)/hy - w_y(c)|^2)
    ||p_h - p||_0^2 = sum over the cells       hx hy |p_T - p(c)|^2

where l, r, b, t are the left, right, bottom and top edges of a cell and c its center.

Norms defined on any polygonal mesh:

    s-extension L2 error    sqrt(sum_T int_T |s(e_u)|^2 + |s(e_v)|^2), integrated exactly
    triple bar norm         sqrt(sum_T |T| |grad_w e|^2 + kappa S_T(e, e)) summed over both components
    divergence residual     max_T |div_w u_b|
"""

__all__ = ['ErrorReport', 'l2_velocity_error', 'h1_cellcenter_error', 'l2_pressure_error', 'extension_l2_norm',
           's_extension_l2_error', 'triple_bar_norm', 'divergence_residual', 'divergence_limit',
           'DIVERGENCE_FACTOR', 'cell_center_velocity', 'mirror_symmetry_defect', 'trace_error', 'compute_error_report']

import dataclasses
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from ..assembly.assembler import Solution
from ..fdstencil.fd_scheme import GridIndexer
from ..element.element_matrices import (QuadratureModeError, element_geometry, extension_matrix, gradient_matrix,
                                        stabilizer_matrix, weak_divergence)
from ..mesh.polygonal_mesh import PolygonalMesh
from .exact_solutions import ExactSolution

_logger = logging.getLogger("swgstokes.Analysis")

DIVERGENCE_FACTOR = 10.0


@dataclasses.dataclass
class ErrorReport:
    """Error norms of one solve. Norms that don't apply to the mesh are left as None."""
    l2_u: Optional[float] = None
    l2_v: Optional[float] = None
    h1_u: Optional[float] = None
    h1_v: Optional[float] = None
    l2_p: Optional[float] = None
    l2_s: Optional[float] = None
    tribar: Optional[float] = None
    div_max: Optional[float] = None

    def as_dict(self) -> Dict[str, Optional[float]]:
        return dataclasses.asdict(self)


def _grid_weight(mesh: PolygonalMesh) -> float:
    if mesh.grid is None or not mesh.grid.uniform:
        raise QuadratureModeError("Grid norms need a uniform rectangular mesh")
    return mesh.grid.hx * mesh.grid.hy


def l2_velocity_error(trace, exact, mesh: PolygonalMesh) -> float:
    """
    Edge midpoint L2 error of one velocity component.

    :param trace: one value per edge
    :param exact: exact component, called with arrays of x and y
    :param mesh: uniform rectangular mesh
    :raises QuadratureModeError: on other meshes
    """
    weight = _grid_weight(mesh)
    mid = mesh.edge_midpoints
    diff = np.asarray(trace, dtype=float) - np.asarray(exact(mid[:, 0], mid[:, 1]), dtype=float)
    return math.sqrt(weight * float(np.dot(diff, diff)))


def h1_cellcenter_error(trace, exact_gradient, mesh: PolygonalMesh) -> float:
    """
    Cell centered difference quotient H1 error of one velocity component.

    :param trace: one value per edge
    :param exact_gradient: returns (w_x, w_y) at arrays of x and y
    :param mesh: uniform rectangular mesh
    """
    weight = _grid_weight(mesh)
    w = np.asarray(trace, dtype=float)
    sides = mesh.rect_cell_sides()
    centers = mesh.cell_centroids
    wx, wy = exact_gradient(centers[:, 0], centers[:, 1])
    ex = (w[sides[:, 1]] - w[sides[:, 0]]) / mesh.grid.hx - np.asarray(wx, dtype=float)
    ey = (w[sides[:, 3]] - w[sides[:, 2]]) / mesh.grid.hy - np.asarray(wy, dtype=float)
    return math.sqrt(weight * float(np.dot(ex, ex) + np.dot(ey, ey)))


def l2_pressure_error(p, exact_p, mesh: PolygonalMesh) -> float:
    weight = _grid_weight(mesh)
    centers = mesh.cell_centroids
    diff = np.asarray(p, dtype=float) - np.asarray(exact_p(centers[:, 0], centers[:, 1]), dtype=float)
    return math.sqrt(weight * float(np.dot(diff, diff)))


def _quadrature_points(vertices: np.ndarray, center: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Centroid fan of triangles with the edge midpoint rule, exact for quadratics"""
    p = vertices
    q = np.roll(p, -1, axis=0)
    tri_area = 0.5 * ((p[:, 0] - center[0]) * (q[:, 1] - center[1]) - (q[:, 0] - center[0]) * (p[:, 1] - center[1]))
    points = np.concatenate((0.5 * (p + q), 0.5 * (center + p), 0.5 * (center + q)))
    return points, np.tile(tri_area / 3.0, 3)


def extension_l2_norm(mesh: PolygonalMesh, trace_u, trace_v) -> float:
    """L2 norm of the piecewise linear extension of a pair of traces"""
    tu = np.asarray(trace_u, dtype=float)
    tv = np.asarray(trace_v, dtype=float)
    total = 0.0
    for cell in mesh.cells:
        geom = element_geometry(cell, mesh)
        d = extension_matrix(geom)
        points, weights = _quadrature_points(geom.vertices, geom.ref_point)
        basis = np.column_stack((np.ones(len(points)), points - geom.ref_point))
        edges = list(cell.edges)
        for trace in (tu, tv):
            s = basis @ (d @ trace[edges])
            total += float(np.dot(weights, s * s))
    return math.sqrt(total)


def trace_error(solution: Solution, exact_velocity, mesh: PolygonalMesh) -> Tuple[np.ndarray, np.ndarray]:
    """Trace of the velocity error: solution minus the exact velocity at every edge midpoint"""
    mid = mesh.edge_midpoints
    eu, ev = exact_velocity(mid[:, 0], mid[:, 1])
    return solution.u - np.asarray(eu, dtype=float), solution.v - np.asarray(ev, dtype=float)


def s_extension_l2_error(solution: Solution, exact_velocity, mesh: PolygonalMesh) -> float:
    """
    L2 norm of the linear extension of the trace error. Works on any polygonal mesh.

    :param solution: discrete solution
    :param exact_velocity: returns (u1, u2) at arrays of x and y
    :param mesh: the mesh of the solution
    """
    return extension_l2_norm(mesh, *trace_error(solution, exact_velocity, mesh))


def triple_bar_norm(mesh: PolygonalMesh, traces, kappa: float) -> float:
    """
    Energy norm of the scheme, ``sqrt(sum_T |T| |grad_w w|^2 + kappa S_T(w, w))`` over both components.

    :param mesh: the mesh
    :param traces: pair (trace_u, trace_v), one value per edge each
    :param kappa: stabilization parameter
    """
    total = 0.0
    for cell in mesh.cells:
        geom = element_geometry(cell, mesh)
        k = kappa * stabilizer_matrix(geom) + gradient_matrix(geom)
        edges = list(cell.edges)
        for trace in traces:
            w = np.asarray(trace, dtype=float)[edges]
            total += float(w @ k @ w)
    return math.sqrt(max(total, 0.0))


def divergence_residual(mesh: PolygonalMesh, solution: Solution) -> float:
    """Largest absolute weak divergence over the cells"""
    worst = 0.0
    for cell in mesh.cells:
        geom = element_geometry(cell, mesh)
        edges = list(cell.edges)
        worst = max(worst, abs(weak_divergence(geom, solution.u[edges], solution.v[edges])))
    return worst


def divergence_limit(solution: Solution, tol: float) -> float:
    """Largest weak divergence accepted after a solve to relative residual ``tol``: 10 tol max(|u|, |v|)"""
    speed = max(float(np.max(np.abs(solution.u), initial=0.0)), float(np.max(np.abs(solution.v), initial=0.0)))
    return DIVERGENCE_FACTOR * tol * speed


def cell_center_velocity(mesh: PolygonalMesh, solution: Solution) -> np.ndarray:
    """Velocity at the cell centroids, given by the linear extension of the traces. n_cells x 2 array."""
    out = np.empty((mesh.n_cells, 2))
    for cell in mesh.cells:
        geom = element_geometry(cell, mesh)
        d0 = extension_matrix(geom)[0]
        edges = list(cell.edges)
        out[cell.id] = (float(d0 @ solution.u[edges]), float(d0 @ solution.v[edges]))
    return out


def mirror_symmetry_defect(mesh: PolygonalMesh, solution: Solution) -> Tuple[float, float, float]:
    """
    Defects of the symmetry of the cavity flow about the vertical center line of a uniform grid: the largest
    values of |u(x, y) - u(x', y)|, |v(x, y) + v(x', y)| and |p(x, y) + p(x', y)|, where x' is the mirror of x.

    :raises QuadratureModeError: if the mesh is not a uniform rectangular grid
    """
    _grid_weight(mesh)
    idx = GridIndexer(mesh)
    nx, ny = idx.nx, idx.ny
    edge = []
    mirror = []
    for j in range(ny):
        for i in range(nx + 1):
            edge.append(idx.vertical(i, j))
            mirror.append(idx.vertical(nx - i, j))
    for j in range(ny + 1):
        for i in range(nx):
            edge.append(idx.horizontal(i, j))
            mirror.append(idx.horizontal(nx - 1 - i, j))
    cells = [idx.cell(i, j) for j in range(ny) for i in range(nx)]
    mirror_cells = [idx.cell(nx - 1 - i, j) for j in range(ny) for i in range(nx)]
    du = float(np.max(np.abs(solution.u[edge] - solution.u[mirror])))
    dv = float(np.max(np.abs(solution.v[edge] + solution.v[mirror])))
    dp = float(np.max(np.abs(solution.p[cells] + solution.p[mirror_cells])))
    return du, dv, dp


def compute_error_report(mesh: PolygonalMesh, solution: Solution, case: ExactSolution, kappa: float) -> ErrorReport:
    """
    Fills every norm that applies to the mesh. Grid norms are only computed on uniform rectangular meshes.
    """
    report = ErrorReport()
    if mesh.grid is not None and mesh.grid.uniform:
        report.l2_u = l2_velocity_error(solution.u, case.u1, mesh)
        report.l2_v = l2_velocity_error(solution.v, case.u2, mesh)
        report.h1_u = h1_cellcenter_error(solution.u, case.grad_u1, mesh)
        report.h1_v = h1_cellcenter_error(solution.v, case.grad_u2, mesh)
        report.l2_p = l2_pressure_error(solution.p, case.p, mesh)
    errors = trace_error(solution, case.velocity, mesh)
    report.l2_s = extension_l2_norm(mesh, *errors)
    report.tribar = triple_bar_norm(mesh, errors, kappa)
    report.div_max = divergence_residual(mesh, solution)
    _logger.debug("Error report %s", report)
    return report

#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        element_matrices.py
# Purpose:     Per element SWG objects and closed form element matrices
#
# Author:      swgstokes developers
#
# Created:     03-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Per element objects of the Simplified Weak Galerkin scheme.

A discrete field is a single value per edge, attached to the edge midpoint (the trace). On a cell T with N edges
the following objects are defined from the traces ``u_i``, the edge lengths ``|e_i|``, the outward unit normals
``n_i`` and the area ``|T|``:

    weak gradient      (1/|T|) sum_i u_i |e_i| n_i
    weak divergence    (1/|T|) sum_i (u_i, v_i).n_i |e_i|
    linear extension   s(u) = a0 + a1 (x - x_T) + a2 (y - y_T), the least squares fit of the traces at the
                       midpoints with weights |e_i|

With ``M`` the N x 3 matrix of rows ``(1, x_i - x_T, y_i - y_T)`` and ``E = diag(|e_i|)`` the extension
coefficients are ``D u`` with ``D = (M^t E M)^-1 M^t E``. The element matrices follow:

    A = h^-1 (E - E M (M^t E M)^-1 M^t E)     stabilizer, with h = max |e_i|
    B = G G^t,  G_i = |e_i| n_i / sqrt(|T|)    weak gradient term
    Q1 = |e| n_x, Q2 = |e| n_y                 divergence coupling

and the velocity block of both components is ``K = kappa A + B``.

All functions are pure and can be evaluated concurrently for different cells.
"""

__all__ = ['GeometryError', 'QuadratureModeError', 'QuadratureRule', 'ElementGeometry', 'LinearExtension',
           'ElementMatrices', 'element_geometry', 'extension_matrix', 'extension_coefficients', 'evaluate_extension',
           'weak_gradient', 'weak_divergence', 'stabilizer_matrix', 'stabilizer_value', 'gradient_matrix',
           'divergence_vectors', 'load_vector', 'element_matrices', 'is_axis_aligned_rectangle',
           'CONDITION_LIMIT']

import dataclasses
import functools
import logging
import math
from enum import Enum
from typing import Callable, Optional, Tuple, Union

import numpy as np

from ..mesh.polygonal_mesh import Cell, PolygonalMesh

_logger = logging.getLogger("swgstokes.Element")

CONDITION_LIMIT = 1e12
"""Largest accepted condition estimate of the 3x3 normal matrix M^t E M"""

ScalarField = Callable[[np.ndarray, np.ndarray], np.ndarray]


class GeometryError(Exception):
    """Raised when the midpoints of a cell don't determine a linear extension (degenerate or ill conditioned cell)"""
    ...


class QuadratureModeError(Exception):
    """Raised when a rectangle only quadrature rule or grid norm is used on a cell that is not an axis aligned
    rectangle"""
    ...


class QuadratureRule(str, Enum):
    """Quadrature used for the element load vector"""
    POLY_DEG2 = 'poly-deg2'  # centroid fan of triangles, edge midpoint rule on each
    SIMPSON_MID = 'simpson-mid'  # rectangles: Simpson along the normal, midpoint along the edge
    FD = 'fd'  # rectangles: |T|/4 f(M_j)

    @classmethod
    def parse(cls, rule: Union[str, 'QuadratureRule']) -> 'QuadratureRule':
        try:
            return cls(rule)
        except ValueError:
            raise QuadratureModeError(f"Unknown quadrature rule {rule!r}. "
                                      f"Valid rules are {', '.join(r.value for r in cls)}")


@dataclasses.dataclass(frozen=True, eq=False)
class ElementGeometry:
    """
    Geometry of one cell in the order of its edge loop.

    ``ref_point`` is the area centroid. ``vertices`` holds the polygon vertices in loop order; it is only needed
    by the load vector quadratures.
    """
    midpoints: np.ndarray
    lengths: np.ndarray
    normals: np.ndarray
    area: float
    ref_point: np.ndarray
    diameter_h: float
    vertices: Optional[np.ndarray] = None

    @classmethod
    def from_arrays(cls, midpoints, lengths, normals, area: float, ref_point, diameter_h: Optional[float] = None,
                    vertices=None) -> 'ElementGeometry':
        lengths = np.asarray(lengths, dtype=float)
        if diameter_h is None:
            diameter_h = float(lengths.max())
        return cls(np.asarray(midpoints, dtype=float).reshape(-1, 2), lengths,
                   np.asarray(normals, dtype=float).reshape(-1, 2), float(area),
                   np.asarray(ref_point, dtype=float), float(diameter_h),
                   None if vertices is None else np.asarray(vertices, dtype=float).reshape(-1, 2))

    @property
    def n(self) -> int:
        """Number of edges"""
        return len(self.lengths)

    @property
    def E(self) -> np.ndarray:
        """Diagonal of the edge length matrix"""
        return self.lengths

    @functools.cached_property
    def M(self) -> np.ndarray:
        m = np.ones((self.n, 3))
        m[:, 1:] = self.midpoints - self.ref_point
        return m

    @functools.cached_property
    def normal_inverse(self) -> np.ndarray:
        """(M^t E M)^-1, symmetric. Raises GeometryError when the matrix is singular or ill conditioned."""
        mtem = self.M.T @ (self.lengths[:, None] * self.M)
        # Scale the linear terms by h so that the condition estimate doesn't depend on the cell size
        scale = np.array([1.0, 1.0 / self.diameter_h, 1.0 / self.diameter_h])
        inv = _inverse_3x3(mtem * scale[:, None] * scale[None, :])
        return inv * scale[:, None] * scale[None, :]

    def reordered(self, order) -> 'ElementGeometry':
        """Same geometry with the edges taken in a different order. The vertices are left untouched."""
        order = np.asarray(order, dtype=int)
        return ElementGeometry(self.midpoints[order], self.lengths[order], self.normals[order], self.area,
                               self.ref_point, self.diameter_h, self.vertices)


def _inverse_3x3(g: np.ndarray) -> np.ndarray:
    """Explicit adjugate inverse with a Frobenius condition check"""
    r0, r1, r2 = g
    c0 = np.cross(r1, r2)
    c1 = np.cross(r2, r0)
    c2 = np.cross(r0, r1)
    det = float(r0 @ c0)
    adj = np.column_stack((c0, c1, c2))
    if det == 0.0 or not math.isfinite(det):
        raise GeometryError("Edge midpoints are collinear: M^t E M is singular")
    condition = np.linalg.norm(g) * np.linalg.norm(adj) / abs(det)
    if condition > CONDITION_LIMIT:
        raise GeometryError(f"M^t E M is ill conditioned (condition estimate {condition:.3e})")
    inv = adj / det
    return 0.5 * (inv + inv.T)


def element_geometry(cell: Cell, mesh: PolygonalMesh) -> ElementGeometry:
    """
    Extracts the element geometry of a mesh cell, in the order of the cell edge loop.

    :param cell: the cell
    :type cell: Cell
    :param mesh: the mesh the cell belongs to
    :type mesh: PolygonalMesh
    :return: element geometry with the centroid as reference point
    :rtype: ElementGeometry
    :raises GeometryError: if the cell area is not positive or the midpoints are collinear
    """
    if not cell.area > 0.0:
        raise GeometryError(f"Cell {cell.id} has non positive area {cell.area:g}")
    geom = ElementGeometry.from_arrays(
        [mesh.edges[e].midpoint for e in cell.edges],
        [mesh.edges[e].length for e in cell.edges],
        cell.normals, cell.area, cell.centroid, cell.diameter_h,
        mesh.cell_vertex_coordinates(cell.id))
    try:
        geom.normal_inverse
    except GeometryError as err:
        raise GeometryError(f"Cell {cell.id}: {err}") from err
    return geom


@dataclasses.dataclass(frozen=True)
class LinearExtension:
    """s(x, y) = alpha0 + alpha1 (x - x_T) + alpha2 (y - y_T)"""
    alpha0: float
    alpha1: float
    alpha2: float
    ref_point: Tuple[float, float] = (0.0, 0.0)

    @property
    def gradient(self) -> Tuple[float, float]:
        return self.alpha1, self.alpha2

    def __call__(self, x, y):
        return self.alpha0 + self.alpha1 * (x - self.ref_point[0]) + self.alpha2 * (y - self.ref_point[1])


def extension_matrix(geom: ElementGeometry) -> np.ndarray:
    """D = (M^t E M)^-1 M^t E, 3 x N. Column j holds the extension coefficients of the j-th basis trace."""
    return geom.normal_inverse @ (geom.M.T * geom.lengths[None, :])


def extension_coefficients(geom: ElementGeometry, trace) -> LinearExtension:
    """
    Least squares linear extension of a trace.

    :param geom: element geometry
    :param trace: N values, one per edge midpoint
    :return: the extension. Linear traces are reproduced exactly.
    :rtype: LinearExtension
    """
    trace = np.asarray(trace, dtype=float)
    alpha = geom.normal_inverse @ (geom.M.T @ (geom.lengths * trace))
    return LinearExtension(float(alpha[0]), float(alpha[1]), float(alpha[2]),
                           (float(geom.ref_point[0]), float(geom.ref_point[1])))


def evaluate_extension(extension: LinearExtension, point) -> float:
    return float(extension(point[0], point[1]))


def weak_gradient(geom: ElementGeometry, trace) -> Tuple[float, float]:
    g = (geom.lengths * np.asarray(trace, dtype=float)) @ geom.normals / geom.area
    return float(g[0]), float(g[1])


def weak_divergence(geom: ElementGeometry, trace_u, trace_v) -> float:
    flux = np.asarray(trace_u, dtype=float) * geom.normals[:, 0] + np.asarray(trace_v, dtype=float) * geom.normals[:, 1]
    return float(np.dot(flux, geom.lengths)) / geom.area


def _mirror_upper(matrix: np.ndarray) -> np.ndarray:
    return np.triu(matrix) + np.triu(matrix, 1).T


def stabilizer_matrix(geom: ElementGeometry) -> np.ndarray:
    """
    A = h^-1 (E - E M (M^t E M)^-1 M^t E), built from its upper triangle so it is exactly symmetric.

    :raises GeometryError: when the normal matrix can't be inverted
    """
    em = geom.lengths[:, None] * geom.M
    projector = em @ geom.normal_inverse @ em.T
    a = (np.diag(geom.lengths) - projector) / geom.diameter_h
    return _mirror_upper(a)


def stabilizer_value(geom: ElementGeometry, trace) -> float:
    """h^-1 sum_i (s(u)(M_i) - u_i)^2 |e_i|, computed from the extension itself"""
    trace = np.asarray(trace, dtype=float)
    s = extension_coefficients(geom, trace)
    mismatch = s(geom.midpoints[:, 0], geom.midpoints[:, 1]) - trace
    return float(np.dot(mismatch * mismatch, geom.lengths)) / geom.diameter_h


def gradient_matrix(geom: ElementGeometry) -> np.ndarray:
    """B = G G^t with rows G_i = |e_i| n_i / sqrt(|T|)"""
    g = geom.lengths[:, None] * geom.normals / math.sqrt(geom.area)
    return _mirror_upper(g @ g.T)


def divergence_vectors(geom: ElementGeometry) -> Tuple[np.ndarray, np.ndarray]:
    return geom.lengths * geom.normals[:, 0], geom.lengths * geom.normals[:, 1]


def is_axis_aligned_rectangle(geom: ElementGeometry, tol: float = 1e-12) -> bool:
    if geom.n != 4:
        return False
    found = set()
    for nx, ny in geom.normals:
        if abs(ny) <= tol and abs(abs(nx) - 1.0) <= tol:
            found.add(('x', nx > 0))
        elif abs(nx) <= tol and abs(abs(ny) - 1.0) <= tol:
            found.add(('y', ny > 0))
    return len(found) == 4


def _evaluate(f: ScalarField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(f(x, y), dtype=float), np.shape(x))


def _load_poly_deg2(geom: ElementGeometry, f: ScalarField, d: np.ndarray) -> np.ndarray:
    if geom.vertices is None:
        raise QuadratureModeError("The poly-deg2 rule needs the cell vertices")
    c = geom.ref_point
    p = geom.vertices
    q = np.roll(p, -1, axis=0)
    # Each triangle (c, p_k, p_k+1) is integrated with its three edge midpoints
    tri_area = 0.5 * ((p[:, 0] - c[0]) * (q[:, 1] - c[1]) - (q[:, 0] - c[0]) * (p[:, 1] - c[1]))
    points = np.concatenate((0.5 * (p + q), 0.5 * (c + p), 0.5 * (c + q)))
    weights = np.tile(tri_area / 3.0, 3)
    values = weights * _evaluate(f, points[:, 0], points[:, 1])
    moments = np.array([values.sum(), np.dot(values, points[:, 0] - c[0]), np.dot(values, points[:, 1] - c[1])])
    return d.T @ moments


def _load_simpson_mid(geom: ElementGeometry, f: ScalarField, d: np.ndarray) -> np.ndarray:
    c = geom.ref_point
    extent = geom.area / geom.lengths  # rectangle size along each edge normal
    p_out = c + 0.5 * extent[:, None] * geom.normals
    p_in = c - 0.5 * extent[:, None] * geom.normals
    loads = np.empty(geom.n)
    for j in range(geom.n):
        points = np.array([p_in[j], c, p_out[j]])
        fv = _evaluate(f, points[:, 0], points[:, 1])
        sv = d[0, j] + d[1, j] * (points[:, 0] - c[0]) + d[2, j] * (points[:, 1] - c[1])
        loads[j] = geom.area / 6.0 * (fv[0] * sv[0] + 4.0 * fv[1] * sv[1] + fv[2] * sv[2])
    return loads


def load_vector(geom: ElementGeometry, f: Optional[ScalarField],
                rule: Union[str, QuadratureRule] = QuadratureRule.POLY_DEG2) -> np.ndarray:
    """
    Element load vector ``F_j = int_T f s(phi_j)``, where ``phi_j`` is the trace equal to 1 on edge j and 0 on the
    others.

    :param geom: element geometry
    :param f: scalar field, called with numpy arrays of x and y coordinates. None means zero.
    :param rule: 'poly-deg2' works on any polygon and is exact when f is linear. 'simpson-mid' and 'fd' are only
        defined on axis aligned rectangles; 'fd' gives ``|T|/4 f(M_j)``.
    :return: N values
    :raises QuadratureModeError: when a rectangle rule is used on another cell shape
    """
    rule = QuadratureRule.parse(rule)
    if f is None:
        return np.zeros(geom.n)
    if rule is not QuadratureRule.POLY_DEG2 and not is_axis_aligned_rectangle(geom):
        raise QuadratureModeError(f"Quadrature rule '{rule.value}' needs an axis aligned rectangle")
    if rule is QuadratureRule.FD:
        return geom.area / 4.0 * _evaluate(f, geom.midpoints[:, 0], geom.midpoints[:, 1])
    d = extension_matrix(geom)
    if rule is QuadratureRule.SIMPSON_MID:
        return _load_simpson_mid(geom, f, d)
    return _load_poly_deg2(geom, f, d)


@dataclasses.dataclass(frozen=True, eq=False)
class ElementMatrices:
    """Element blocks of the SWG scheme. ``K = kappa A + B`` is the velocity block of both components."""
    A: np.ndarray
    B: np.ndarray
    Q1: np.ndarray
    Q2: np.ndarray
    D: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    kappa: float

    @property
    def K(self) -> np.ndarray:
        return self.kappa * self.A + self.B


def element_matrices(geom: ElementGeometry, kappa: float, f1: Optional[ScalarField] = None,
                     f2: Optional[ScalarField] = None,
                     rule: Union[str, QuadratureRule] = QuadratureRule.POLY_DEG2) -> ElementMatrices:
    """
    Computes all the element blocks of one cell.

    :param geom: element geometry
    :param kappa: stabilization parameter, positive
    :param f1: x component of the body force
    :param f2: y component of the body force
    :param rule: load vector quadrature
    :rtype: ElementMatrices
    """
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    q1, q2 = divergence_vectors(geom)
    return ElementMatrices(stabilizer_matrix(geom), gradient_matrix(geom), q1, q2, extension_matrix(geom),
                           load_vector(geom, f1, rule), load_vector(geom, f2, rule), float(kappa))

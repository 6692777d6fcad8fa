#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        polygonal_mesh.py
# Purpose:     Polygonal mesh data structures with edge-midpoint geometry
#
# Author:      swgstokes developers
#
# Created:     02-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Defines the polygonal mesh on which the Simplified Weak Galerkin (SWG) scheme is built.

A mesh is made of vertices, straight edges and polygonal cells. Every quantity the discretization needs is derived
from the vertex coordinates when the mesh is built and is stored once:

    + for each edge: its midpoint, its length ``|e|``, a canonical unit normal and the incident cells;
    + for each cell: the counterclockwise loop of edges, the outward unit normal of each edge, the area ``|T|``, the
      area centroid and the diameter ``h = max |e_i|``.

The outward normal of an edge seen from a cell is the canonical normal of the edge multiplied by a sign (+1 or -1)
that depends only on the direction in which the cell walks the edge. Two cells sharing an edge walk it in opposite
directions, so their normals are exact negatives of each other.

Edges are numbered by sorting their midpoints lexicographically, y first and then x. Building the same mesh twice
therefore gives the same numbering, and the assembled matrices are reproducible.

Meshes are immutable after construction and can be shared freely between threads.
"""
__author__ = "swgstokes developers"
__copyright__ = "Copyright 2026"

__all__ = ['Vertex', 'Edge', 'Cell', 'RectGrid', 'MeshDiagnostic', 'PolygonalMesh', 'validate_mesh',
           'MeshValidationError', 'CLOSURE_TOLERANCE']

import dataclasses
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

_logger = logging.getLogger("swgstokes.Mesh")

CLOSURE_TOLERANCE = 1e-12
"""Relative tolerance used by the mesh validator. Scaled by the cell diameter or the edge length."""


class MeshValidationError(Exception):
    """Raised when a mesh does not satisfy the structural invariants. The message names the offending entity."""
    ...


@dataclasses.dataclass(frozen=True)
class Vertex:
    id: int
    x: float
    y: float


@dataclasses.dataclass(frozen=True)
class Edge:
    """A straight edge. ``normal`` is the canonical unit normal, obtained by rotating the vector that goes from the
    lower to the higher vertex id by -90 degrees. Cells see it multiplied by their orientation sign."""
    id: int
    endpoints: Tuple[int, int]
    midpoint: Tuple[float, float]
    length: float
    normal: Tuple[float, float]
    boundary: bool
    incident_cells: Tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class Cell:
    """A polygonal cell. ``edges[k]`` joins ``vertices[k]`` to ``vertices[k+1]``, counterclockwise."""
    id: int
    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    orientation: Tuple[int, ...]
    normals: Tuple[Tuple[float, float], ...]
    area: float
    centroid: Tuple[float, float]
    diameter_h: float

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclasses.dataclass(frozen=True)
class RectGrid:
    """Tensor product structure of a rectangular mesh. Only attached by the rectangular mesh generators."""
    x_nodes: Tuple[float, ...]
    y_nodes: Tuple[float, ...]

    @property
    def nx(self) -> int:
        return len(self.x_nodes) - 1

    @property
    def ny(self) -> int:
        return len(self.y_nodes) - 1

    @property
    def domain(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        return (self.x_nodes[0], self.x_nodes[-1]), (self.y_nodes[0], self.y_nodes[-1])

    @property
    def hx(self) -> float:
        """Grid step in x, computed as domain width / nx. Only meaningful on uniform grids."""
        return (self.x_nodes[-1] - self.x_nodes[0]) / self.nx

    @property
    def hy(self) -> float:
        return (self.y_nodes[-1] - self.y_nodes[0]) / self.ny

    @property
    def uniform(self) -> bool:
        """True when all steps are equal (within roundoff) in each direction."""
        dx = np.diff(self.x_nodes)
        dy = np.diff(self.y_nodes)
        return bool(np.allclose(dx, self.hx, rtol=1e-12, atol=0.0) and np.allclose(dy, self.hy, rtol=1e-12, atol=0.0))

    @property
    def square_cells(self) -> bool:
        return self.uniform and math.isclose(self.hx, self.hy, rel_tol=1e-12)


@dataclasses.dataclass(frozen=True)
class MeshDiagnostic:
    """One violated invariant, as reported by :func:`validate_mesh`."""
    entity: str
    id: int
    message: str

    def __str__(self):
        return f"{self.entity} {self.id}: {self.message}"


class PolygonalMesh(object):
    """
    Immutable polygonal mesh.

    Normally built with :meth:`PolygonalMesh.from_polygons` or through the generators of
    :mod:`swgstokes.mesh.mesh_factory` and :func:`swgstokes.mesh.mesh_io.load_mesh`. The constructor takes already
    derived entities and doesn't check them; use :func:`validate_mesh` for that.

    :param vertices: mesh vertices, ids dense from 0
    :type vertices: Sequence[Vertex]
    :param edges: mesh edges, ids dense from 0
    :type edges: Sequence[Edge]
    :param cells: mesh cells, ids dense from 0
    :type cells: Sequence[Cell]
    :param grid: tensor product structure, only for rectangular generated meshes
    :type grid: RectGrid, optional
    """

    def __init__(self, vertices: Sequence[Vertex], edges: Sequence[Edge], cells: Sequence[Cell],
                 grid: Optional[RectGrid] = None):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.cells = tuple(cells)
        self.grid = grid
        self._boundary_edges = tuple(edge.id for edge in self.edges if edge.boundary)
        self._interior_edges = tuple(edge.id for edge in self.edges if not edge.boundary)

    @classmethod
    def from_polygons(cls, coordinates, cell_loops: Sequence[Sequence[int]],
                      grid: Optional[RectGrid] = None) -> 'PolygonalMesh':
        """
        Builds a mesh from vertex coordinates and counterclockwise vertex loops. All the derived geometry is computed
        here.

        :param coordinates: V x 2 array like with the vertex coordinates
        :param cell_loops: one list of vertex ids per cell, counterclockwise, without repeating the first vertex
        :param grid: optional tensor product structure to attach
        :return: the mesh
        :rtype: PolygonalMesh
        """
        xy = np.asarray(coordinates, dtype=float).reshape(-1, 2)
        vertices = [Vertex(i, float(x), float(y)) for i, (x, y) in enumerate(xy)]

        # Collect each edge once, keyed by its sorted endpoints, with the cells walking it
        walks: Dict[Tuple[int, int], List[int]] = {}
        for cell_id, loop in enumerate(cell_loops):
            for k in range(len(loop)):
                a, b = int(loop[k]), int(loop[(k + 1) % len(loop)])
                walks.setdefault((min(a, b), max(a, b)), []).append(cell_id)

        def midpoint_of(key):
            lo, hi = key
            return 0.5 * (xy[lo, 0] + xy[hi, 0]), 0.5 * (xy[lo, 1] + xy[hi, 1])

        ordered_keys = sorted(walks, key=lambda key: (midpoint_of(key)[1], midpoint_of(key)[0], key))
        edge_index = {key: i for i, key in enumerate(ordered_keys)}

        edges = []
        for i, key in enumerate(ordered_keys):
            lo, hi = key
            tx = xy[hi, 0] - xy[lo, 0]
            ty = xy[hi, 1] - xy[lo, 1]
            length = math.hypot(tx, ty)
            if length > 0.0:
                normal = (ty / length, -tx / length)
            else:
                normal = (0.0, 0.0)
            mx, my = midpoint_of(key)
            incident = tuple(sorted(set(walks[key])))
            edges.append(Edge(i, key, (float(mx), float(my)), float(length), (float(normal[0]), float(normal[1])),
                              len(walks[key]) == 1, incident))

        cells = []
        for cell_id, loop in enumerate(cell_loops):
            loop = tuple(int(v) for v in loop)
            edge_ids = []
            orientation = []
            normals = []
            for k in range(len(loop)):
                a, b = loop[k], loop[(k + 1) % len(loop)]
                key = (min(a, b), max(a, b))
                edge = edges[edge_index[key]]
                sign = 1 if a < b else -1
                edge_ids.append(edge.id)
                orientation.append(sign)
                normals.append((sign * edge.normal[0], sign * edge.normal[1]))
            area, centroid = _polygon_area_centroid(xy[list(loop)])
            diameter = max(edges[e].length for e in edge_ids) if edge_ids else 0.0
            cells.append(Cell(cell_id, loop, tuple(edge_ids), tuple(orientation), tuple(normals), area, centroid,
                              diameter))

        mesh = cls(vertices, edges, cells, grid)
        _logger.debug("Mesh built: %d vertices, %d edges (%d boundary), %d cells",
                      mesh.n_vertices, mesh.n_edges, len(mesh.boundary_edges), mesh.n_cells)
        return mesh

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def boundary_edges(self) -> Tuple[int, ...]:
        """Ids of the edges with a single incident cell, in edge order"""
        return self._boundary_edges

    @property
    def interior_edges(self) -> Tuple[int, ...]:
        return self._interior_edges

    @property
    def vertex_coordinates(self) -> np.ndarray:
        return np.array([(v.x, v.y) for v in self.vertices], dtype=float).reshape(-1, 2)

    @property
    def edge_midpoints(self) -> np.ndarray:
        return np.array([e.midpoint for e in self.edges], dtype=float).reshape(-1, 2)

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.edges], dtype=float)

    @property
    def cell_areas(self) -> np.ndarray:
        return np.array([c.area for c in self.cells], dtype=float)

    @property
    def cell_centroids(self) -> np.ndarray:
        return np.array([c.centroid for c in self.cells], dtype=float).reshape(-1, 2)

    def cell_vertex_coordinates(self, cell_id: int) -> np.ndarray:
        """Returns the N x 2 array with the vertices of a cell, in loop order"""
        return np.array([(self.vertices[v].x, self.vertices[v].y) for v in self.cells[cell_id].vertices], dtype=float)

    def outward_normal(self, cell_id: int, edge_id: int) -> Tuple[float, float]:
        """Outward unit normal of an edge as seen from one of its incident cells"""
        cell = self.cells[cell_id]
        return cell.normals[cell.edges.index(edge_id)]

    def bounding_box(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        xy = self.vertex_coordinates
        return (float(xy[:, 0].min()), float(xy[:, 0].max())), (float(xy[:, 1].min()), float(xy[:, 1].max()))

    def rect_cell_sides(self) -> np.ndarray:
        """
        For meshes made of axis aligned rectangles, returns an n_cells x 4 integer array with the ids of the left,
        right, bottom and top edges of each cell.

        :raises ValueError: if any cell is not an axis aligned rectangle
        """
        sides = np.empty((self.n_cells, 4), dtype=int)
        targets = ((-1.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 1.0))
        for cell in self.cells:
            if cell.n_edges != 4:
                raise ValueError(f"Cell {cell.id} has {cell.n_edges} edges, not a rectangle")
            for k, target in enumerate(targets):
                for edge_id, normal in zip(cell.edges, cell.normals):
                    if (abs(normal[0] - target[0]) <= CLOSURE_TOLERANCE
                            and abs(normal[1] - target[1]) <= CLOSURE_TOLERANCE):
                        sides[cell.id, k] = edge_id
                        break
                else:
                    raise ValueError(f"Cell {cell.id} is not an axis aligned rectangle")
        return sides

    def __repr__(self):
        return f"PolygonalMesh(vertices={self.n_vertices}, edges={self.n_edges}, cells={self.n_cells})"


def _polygon_area_centroid(xy: np.ndarray) -> Tuple[float, Tuple[float, float]]:
    """Signed shoelace area and area centroid of a closed polygon given by its vertex loop"""
    x = xy[:, 0]
    y = xy[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * float(np.sum(cross))
    if area == 0.0:
        return 0.0, (float(np.mean(x)), float(np.mean(y)))
    cx = float(np.sum((x + xn) * cross)) / (6.0 * area)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * area)
    return area, (cx, cy)


def validate_mesh(mesh: PolygonalMesh) -> List[MeshDiagnostic]:
    """
    Checks the structural invariants of a mesh. Diagnostics are returned as data; nothing is raised.

    The checks are: finite coordinates, positive edge lengths consistent with the endpoints, midpoints at the
    average of the endpoints, unit normals, one or two incident cells per edge (boundary flag consistent), positive
    cell areas, closed edge loops, polygon closure ``||sum |e_i| n_i|| <= 1e-12 h`` and opposite normals on interior
    edges. For meshes with a rectangular grid attached, the cell areas must add up to the domain area.

    :param mesh: mesh to check
    :type mesh: PolygonalMesh
    :return: list of diagnostics, empty if the mesh is valid
    :rtype: list[MeshDiagnostic]
    """
    diagnostics = []
    tol = CLOSURE_TOLERANCE

    for vertex in mesh.vertices:
        if not (math.isfinite(vertex.x) and math.isfinite(vertex.y)):
            diagnostics.append(MeshDiagnostic('vertex', vertex.id, "non finite coordinates"))

    for edge in mesh.edges:
        a = mesh.vertices[edge.endpoints[0]]
        b = mesh.vertices[edge.endpoints[1]]
        distance = math.hypot(b.x - a.x, b.y - a.y)
        if not edge.length > 0.0:
            diagnostics.append(MeshDiagnostic('edge', edge.id, "zero length"))
            continue
        if abs(edge.length - distance) > tol * distance:
            diagnostics.append(MeshDiagnostic('edge', edge.id, "length differs from endpoint distance"))
        if (abs(edge.midpoint[0] - 0.5 * (a.x + b.x)) > tol * edge.length or
                abs(edge.midpoint[1] - 0.5 * (a.y + b.y)) > tol * edge.length):
            diagnostics.append(MeshDiagnostic('edge', edge.id, "midpoint is not the endpoint average"))
        if abs(math.hypot(*edge.normal) - 1.0) > tol:
            diagnostics.append(MeshDiagnostic('edge', edge.id, "normal is not unit length"))
        if len(edge.incident_cells) not in (1, 2):
            diagnostics.append(MeshDiagnostic('edge', edge.id,
                                              f"dangling edge with {len(edge.incident_cells)} incident cells"))
        elif edge.boundary != (len(edge.incident_cells) == 1):
            diagnostics.append(MeshDiagnostic('edge', edge.id, "boundary flag inconsistent with incident cells"))

    for cell in mesh.cells:
        if not cell.area > 0.0:
            diagnostics.append(MeshDiagnostic('cell', cell.id, f"non positive area {cell.area:g}"))
        nv = len(cell.vertices)
        for k, edge_id in enumerate(cell.edges):
            expected = {cell.vertices[k], cell.vertices[(k + 1) % nv]}
            if set(mesh.edges[edge_id].endpoints) != expected:
                diagnostics.append(MeshDiagnostic('cell', cell.id, "edge loop does not close"))
                break
        normals = np.asarray(cell.normals, dtype=float).reshape(-1, 2)
        lengths = np.array([mesh.edges[e].length for e in cell.edges], dtype=float)
        if np.any(np.abs(np.hypot(normals[:, 0], normals[:, 1]) - 1.0) > tol):
            diagnostics.append(MeshDiagnostic('cell', cell.id, "normal is not unit length"))
        closure = np.hypot(*(lengths @ normals)) if len(lengths) else 0.0
        if closure > tol * cell.diameter_h:
            diagnostics.append(MeshDiagnostic('cell', cell.id, f"closure violated: |sum |e|n| = {closure:.3e}"))

    for edge in mesh.edges:
        if len(edge.incident_cells) == 2:
            n1 = mesh.outward_normal(edge.incident_cells[0], edge.id)
            n2 = mesh.outward_normal(edge.incident_cells[1], edge.id)
            if n1[0] != -n2[0] or n1[1] != -n2[1]:
                diagnostics.append(MeshDiagnostic('edge', edge.id, "normals of the incident cells are not opposite"))

    if mesh.grid is not None:
        (x0, x1), (y0, y1) = mesh.grid.domain
        domain_area = (x1 - x0) * (y1 - y0)
        total = math.fsum(cell.area for cell in mesh.cells)
        if abs(total - domain_area) > tol * domain_area:
            diagnostics.append(MeshDiagnostic('mesh', 0, f"cells do not tile the domain: {total!r} != {domain_area!r}"))

    if diagnostics:
        _logger.debug("Mesh validation found %d problems", len(diagnostics))
    return diagnostics

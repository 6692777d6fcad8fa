#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        mesh_factory.py
# Purpose:     Generators of structured, perturbed and single polygon meshes
#
# Author:      swgstokes developers
#
# Created:     02-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Mesh generators.

All generators are deterministic. The perturbed quadrilateral mesh uses :class:`SplitMix64`, a small 64-bit
generator whose output only depends on the seed, so that the same mesh can be rebuilt by any implementation.

Vertex numbering of the rectangular meshes is ``j*(nx+1) + i`` for the node ``(x_i, y_j)`` and the cell numbering is
``j*nx + i``. Each cell is walked counterclockwise starting at its lower left vertex.
"""

__all__ = ['Domain', 'UNIT_SQUARE', 'MeshGenerationError', 'SplitMix64', 'build_uniform_rect_mesh',
           'build_tensor_rect_mesh', 'build_perturbed_quad_mesh', 'regular_polygon_mesh', 'random_convex_polygon']

import logging
import math
from typing import Sequence, Tuple

import numpy as np

from .polygonal_mesh import PolygonalMesh, RectGrid

_logger = logging.getLogger("swgstokes.Mesh")

Domain = Tuple[Tuple[float, float], Tuple[float, float]]
UNIT_SQUARE: Domain = ((0.0, 1.0), (0.0, 1.0))

MAX_PERTURBATION = 0.3


class MeshGenerationError(Exception):
    """Raised when a generator is called with invalid arguments or produces an invalid cell"""
    ...


class SplitMix64(object):
    """
    SplitMix64 pseudo random generator.

    The state is advanced by the golden ratio constant and the output is mixed with two multiply-xorshift rounds.
    Doubles are made from the 53 high bits of each output, so :meth:`uniform` returns values in [0, 1).
    """
    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = int(seed) & self._MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def symmetric(self) -> float:
        """Uniform value in [-1, 1)"""
        return 2.0 * self.uniform() - 1.0


def _check_domain(domain: Domain) -> Tuple[float, float, float, float]:
    try:
        (x0, x1), (y0, y1) = domain
        x0, x1, y0, y1 = float(x0), float(x1), float(y0), float(y1)
    except (TypeError, ValueError):
        raise MeshGenerationError(f"Domain must be ((x0, x1), (y0, y1)), got {domain!r}")
    if not (x1 > x0 and y1 > y0):
        raise MeshGenerationError(f"Domain {domain!r} has no positive width and height")
    return x0, x1, y0, y1


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise MeshGenerationError(f"Number of divisions must be a positive integer, got {n!r}")
    return int(n)


def _rect_loops(nx: int, ny: int):
    loops = []
    for j in range(ny):
        for i in range(nx):
            v = j * (nx + 1) + i
            loops.append([v, v + 1, v + nx + 2, v + nx + 1])
    return loops


def build_tensor_rect_mesh(x_nodes: Sequence[float], y_nodes: Sequence[float]) -> PolygonalMesh:
    """
    Builds a rectangular mesh from the node coordinates along each axis. The spacing doesn't need to be uniform.

    :param x_nodes: strictly increasing x coordinates, at least two
    :param y_nodes: strictly increasing y coordinates, at least two
    :return: mesh with a :class:`RectGrid` attached
    :rtype: PolygonalMesh
    :raises MeshGenerationError: if the nodes are not strictly increasing
    """
    xs = np.asarray(x_nodes, dtype=float)
    ys = np.asarray(y_nodes, dtype=float)
    for name, nodes in (('x', xs), ('y', ys)):
        if nodes.ndim != 1 or len(nodes) < 2:
            raise MeshGenerationError(f"At least two {name} nodes are needed")
        if not np.all(np.isfinite(nodes)) or not np.all(np.diff(nodes) > 0):
            raise MeshGenerationError(f"The {name} nodes must be finite and strictly increasing")
    nx = len(xs) - 1
    ny = len(ys) - 1
    xx, yy = np.meshgrid(xs, ys)  # row j holds y_j
    coordinates = np.column_stack((xx.ravel(), yy.ravel()))
    grid = RectGrid(tuple(float(x) for x in xs), tuple(float(y) for y in ys))
    mesh = PolygonalMesh.from_polygons(coordinates, _rect_loops(nx, ny), grid=grid)
    _logger.info("Rectangular mesh %dx%d built (%d edges)", nx, ny, mesh.n_edges)
    return mesh


def build_uniform_rect_mesh(n: int, domain: Domain = UNIT_SQUARE) -> PolygonalMesh:
    """
    Builds the uniform n x n partition of an axis aligned rectangle.

    :param n: number of divisions along each axis
    :type n: int
    :param domain: ((x0, x1), (y0, y1)), defaults to the unit square
    :return: mesh with n*n congruent rectangles
    :rtype: PolygonalMesh
    """
    n = _check_n(n)
    x0, x1, y0, y1 = _check_domain(domain)
    return build_tensor_rect_mesh(np.linspace(x0, x1, n + 1), np.linspace(y0, y1, n + 1))


def _non_convex_cell(coordinates: np.ndarray, loops) -> int:
    """Returns the id of the first cell that is not strictly convex, or -1"""
    for cell_id, loop in enumerate(loops):
        xy = coordinates[loop]
        d = np.roll(xy, -1, axis=0) - xy
        cross = d[:, 0] * np.roll(d[:, 1], -1) - d[:, 1] * np.roll(d[:, 0], -1)
        if np.any(cross <= 0.0):
            return cell_id
    return -1


def build_perturbed_quad_mesh(n: int, domain: Domain = UNIT_SQUARE, amplitude: float = 0.1,
                              seed: int = 0) -> PolygonalMesh:
    """
    Builds the uniform n x n mesh and moves every interior vertex by ``amplitude * h * (r1, r2)``, where r1 and r2
    are drawn in [-1, 1) from :class:`SplitMix64` seeded with ``seed``. Vertices are visited in id order and x is
    drawn before y. Boundary vertices stay in place, so the domain is unchanged.

    :param n: number of divisions along each axis
    :param domain: ((x0, x1), (y0, y1))
    :param amplitude: displacement relative to the grid step, in [0, 0.3)
    :param seed: generator seed
    :return: mesh of convex quadrilaterals. The rectangular grid is only attached when amplitude is 0.
    :rtype: PolygonalMesh
    :raises MeshGenerationError: on invalid arguments or if a cell is not convex
    """
    n = _check_n(n)
    x0, x1, y0, y1 = _check_domain(domain)
    if not (0.0 <= amplitude < MAX_PERTURBATION):
        raise MeshGenerationError(f"Perturbation amplitude must be in [0, {MAX_PERTURBATION}), got {amplitude!r}")
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    h = min((x1 - x0) / n, (y1 - y0) / n)
    xx, yy = np.meshgrid(xs, ys)
    coordinates = np.column_stack((xx.ravel(), yy.ravel()))

    rng = SplitMix64(seed)
    for vid in range(len(coordinates)):
        i, j = vid % (n + 1), vid // (n + 1)
        if 0 < i < n and 0 < j < n:
            dx = amplitude * h * rng.symmetric()
            dy = amplitude * h * rng.symmetric()
            coordinates[vid, 0] += dx
            coordinates[vid, 1] += dy

    loops = _rect_loops(n, n)
    bad = _non_convex_cell(coordinates, loops)
    if bad >= 0:
        _logger.error("Perturbed mesh has a non convex cell %d", bad)
        raise MeshGenerationError(f"Cell {bad} is not convex after perturbation")
    grid = RectGrid(tuple(float(x) for x in xs), tuple(float(y) for y in ys)) if amplitude == 0 else None
    mesh = PolygonalMesh.from_polygons(coordinates, loops, grid=grid)
    _logger.info("Perturbed mesh %dx%d built (amplitude=%g, seed=%d)", n, n, amplitude, seed)
    return mesh


def regular_polygon_mesh(sides: int, side_length: float = 1.0, center=(0.0, 0.0)) -> PolygonalMesh:
    """
    Single cell mesh with a regular polygon. Vertex k sits at angle (2k-1)*pi/sides, so edge k has its outward
    normal at angle 2*k*pi/sides. A square comes out axis aligned.
    """
    if isinstance(sides, bool) or int(sides) != sides or sides < 3:
        raise MeshGenerationError(f"A polygon needs at least 3 sides, got {sides!r}")
    if not side_length > 0:
        raise MeshGenerationError(f"Side length must be positive, got {side_length!r}")
    sides = int(sides)
    radius = side_length / (2.0 * math.sin(math.pi / sides))
    angles = [(2 * k - 1) * math.pi / sides for k in range(sides)]
    coordinates = [(center[0] + radius * math.cos(a), center[1] + radius * math.sin(a)) for a in angles]
    return PolygonalMesh.from_polygons(coordinates, [list(range(sides))])


def random_convex_polygon(rng: np.random.Generator, n_sides: int) -> PolygonalMesh:
    """
    Single cell mesh with a random convex polygon.

    The vertices lie on a circle, with angular gaps drawn in [1, 2) before normalisation so that no gap exceeds
    half a turn. The polygon is then stretched, rotated and shifted by a random affine map, which keeps convexity.

    :param rng: numpy random generator, e.g. ``numpy.random.default_rng(seed)``
    :param n_sides: number of edges, at least 3
    :rtype: PolygonalMesh
    """
    if n_sides < 3:
        raise MeshGenerationError(f"A polygon needs at least 3 sides, got {n_sides!r}")
    gaps = 1.0 + rng.random(n_sides)
    angles = np.cumsum(gaps) / gaps.sum() * 2.0 * np.pi + rng.random() * 2.0 * np.pi
    xy = np.column_stack((np.cos(angles), np.sin(angles)))
    stretch = np.diag(0.5 + 1.5 * rng.random(2))
    theta = rng.random() * 2.0 * np.pi
    rotation = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    xy = xy @ (rotation @ stretch).T + rng.uniform(-5.0, 5.0, size=2)
    return PolygonalMesh.from_polygons(xy, [list(range(n_sides))])

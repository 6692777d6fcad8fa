#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        mesh_io.py
# Purpose:     Reads and writes polygonal meshes in JSON format
#
# Author:      swgstokes developers
#
# Created:     03-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Mesh files are UTF-8 JSON documents with two keys::

    {
        "vertices": [[x0, y0], [x1, y1], ...],
        "cells": [[v0, v1, v2, ...], ...]
    }

Each cell is a counterclockwise loop of vertex ids. The loop may repeat its first vertex at the end. All the derived
geometry (midpoints, lengths, normals, areas, diameters) is computed on load and the mesh is validated before it is
returned.
"""

__all__ = ['MeshParseError', 'load_mesh', 'save_mesh']

import json
import logging
import math
import pathlib
from typing import List, Union

from .polygonal_mesh import PolygonalMesh, MeshValidationError, validate_mesh

_logger = logging.getLogger("swgstokes.MeshIO")


class MeshParseError(Exception):
    """Raised when a mesh file is not valid JSON or doesn't follow the mesh format"""
    ...


def _parse_vertices(raw) -> List[List[float]]:
    if not isinstance(raw, list) or not raw:
        raise MeshParseError("'vertices' must be a non empty list of [x, y] pairs")
    vertices = []
    for vid, entry in enumerate(raw):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise MeshParseError(f"Vertex {vid} is not a [x, y] pair")
        try:
            x, y = float(entry[0]), float(entry[1])
        except (TypeError, ValueError):
            raise MeshParseError(f"Vertex {vid} has non numeric coordinates")
        if isinstance(entry[0], bool) or isinstance(entry[1], bool) or not (math.isfinite(x) and math.isfinite(y)):
            raise MeshParseError(f"Vertex {vid} has invalid coordinates {entry!r}")
        vertices.append([x, y])
    return vertices


def _parse_cells(raw, n_vertices: int) -> List[List[int]]:
    if not isinstance(raw, list) or not raw:
        raise MeshParseError("'cells' must be a non empty list of vertex loops")
    loops = []
    for cid, entry in enumerate(raw):
        if not isinstance(entry, list):
            raise MeshParseError(f"Cell {cid} is not a list of vertex ids")
        for v in entry:
            if isinstance(v, bool) or not isinstance(v, int):
                raise MeshParseError(f"Cell {cid} has a non integer vertex id {v!r}")
            if not 0 <= v < n_vertices:
                raise MeshParseError(f"Cell {cid} refers to vertex {v}, which doesn't exist")
        loop = list(entry)
        if len(loop) > 1 and loop[-1] == loop[0]:
            loop.pop()
        if len(loop) < 3 or len(set(loop)) != len(loop):
            raise MeshValidationError(f"Cell {cid}: edge loop does not close (open loop {entry!r})")
        loops.append(loop)
    return loops


def load_mesh(path: Union[str, pathlib.Path]) -> PolygonalMesh:
    """
    Reads a mesh file and validates it.

    :param path: path to the JSON mesh file
    :type path: str or pathlib.Path
    :return: validated mesh
    :rtype: PolygonalMesh
    :raises MeshParseError: if the file is not valid JSON or doesn't have the expected structure
    :raises MeshValidationError: if a cell loop is open, a cell has non positive area or an edge is dangling. The
        message names the offending cell or edge.
    """
    path = pathlib.Path(path)
    _logger.info("Reading mesh file %s", path)
    try:
        with open(path, 'r', encoding='utf-8') as fin:
            data = json.load(fin)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise MeshParseError(f"{path}: {err}") from err
    if not isinstance(data, dict) or 'vertices' not in data or 'cells' not in data:
        raise MeshParseError(f"{path}: expected an object with 'vertices' and 'cells' keys")

    vertices = _parse_vertices(data['vertices'])
    loops = _parse_cells(data['cells'], len(vertices))
    used = {v for loop in loops for v in loop}
    if len(used) != len(vertices):
        _logger.warning("%s: %d vertices are not used by any cell", path, len(vertices) - len(used))

    mesh = PolygonalMesh.from_polygons(vertices, loops)
    diagnostics = validate_mesh(mesh)
    if diagnostics:
        for diagnostic in diagnostics:
            _logger.error("%s: %s", path, diagnostic)
        raise MeshValidationError("; ".join(str(d) for d in diagnostics))
    _logger.info("Mesh %s: %d cells, %d edges", path.name, mesh.n_cells, mesh.n_edges)
    return mesh


def save_mesh(mesh: PolygonalMesh, path: Union[str, pathlib.Path]) -> None:
    """
    Writes a mesh in the format read by :func:`load_mesh`. Coordinates are written with full precision so that a
    mesh read back has exactly the same geometry.
    """
    data = {
        'vertices': [[v.x, v.y] for v in mesh.vertices],
        'cells': [list(cell.vertices) for cell in mesh.cells],
    }
    with open(path, 'w', encoding='utf-8') as fout:
        json.dump(data, fout)
        fout.write('\n')
    _logger.info("Mesh written to %s", path)

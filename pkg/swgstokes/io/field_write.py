#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        field_write.py
# Purpose:     Write solution fields and run summaries as CSV files
#
# Author:      swgstokes developers
#
# Created:     11-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------

__all__ = ['write_traces', 'write_summary', 'write_fields_vtk']

import logging
import pathlib
from typing import Mapping, Optional, Union

from ..analysis.error_norms import cell_center_velocity
from ..assembly.assembler import Solution
from ..mesh.polygonal_mesh import PolygonalMesh
from .table_write import write_csv
from .vtk_write import CellField, VtkWrite

_logger = logging.getLogger("swgstokes.TableWrite")

PathLike = Union[str, pathlib.Path]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return '%.17g' % value
    return str(value)


def write_traces(mesh: PolygonalMesh, solution: Solution, path: PathLike) -> pathlib.Path:
    """One line per edge: id, midpoint, the two velocity traces and the boundary flag"""
    rows = []
    for edge in mesh.edges:
        rows.append([str(edge.id), _fmt(float(edge.midpoint[0])), _fmt(float(edge.midpoint[1])),
                     _fmt(float(solution.u[edge.id])), _fmt(float(solution.v[edge.id])), str(int(edge.boundary))])
    return write_csv(path, ('edge', 'x', 'y', 'u', 'v', 'boundary'), rows)


def write_summary(values: Mapping[str, object], path: PathLike) -> pathlib.Path:
    """Writes key/value pairs, one per line, in the order given"""
    return write_csv(path, ('quantity', 'value'), [[key, _fmt(value)] for key, value in values.items()])


def write_fields_vtk(mesh: PolygonalMesh, solution: Solution, path: PathLike,
                     title: Optional[str] = None) -> pathlib.Path:
    """Writes the cell pressures and the velocity of the linear extension at the centroids as a VTK file"""
    vtk = VtkWrite(mesh, title)
    vtk.add_field(CellField('pressure', solution.p, 'scalar'))
    vtk.add_field(CellField('velocity', cell_center_velocity(mesh, solution), 'vector'))
    vtk.save(path)
    return pathlib.Path(path)

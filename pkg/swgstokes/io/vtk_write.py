#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        vtk_write.py
# Purpose:     Create legacy VTK files of cell fields
#
# Author:      swgstokes developers
#
# Created:     11-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------

"""
This module writes polygonal meshes and their cell fields as legacy ASCII VTK files (unstructured grid), readable by
ParaView, VisIt and most other viewers. ::

    from swgstokes.io import VtkWrite, CellField

    vtk = VtkWrite(mesh, title='cavity n=32')
    vtk.add_field(CellField('pressure', solution.p))
    vtk.add_field(CellField('velocity', cell_center_velocity(mesh, solution)))
    vtk.save('cavity_n32.vtk')

Every number is written with 17 significant digits and nothing depends on the clock, so writing the same fields
twice gives identical files.
"""

__all__ = ['CellField', 'VtkWrite', 'VTK_POLYGON']

import logging
import pathlib
from typing import List, Optional, Union

import numpy as np

from ..mesh.polygonal_mesh import PolygonalMesh

_logger = logging.getLogger("swgstokes.VtkWrite")

VTK_POLYGON = 7
"""VTK cell type of a polygon"""


def _fmt(value) -> str:
    return '%.17g' % value


class CellField(object):
    """
    Helper class holding a field with one value per cell.

    :param name: name of the field in the file. Spaces are not allowed by the format.
    :type name: str
    :param data: one scalar per cell, or one (x, y) pair per cell for a vector field
    :type data: list or numpy.array
    :param fieldtype: 'scalar', 'vector' or 'auto', which picks the type from the shape of the data
    :type fieldtype: str
    """

    def __init__(self, name: str, data, fieldtype: str = 'auto'):
        if not name or any(c.isspace() for c in name):
            raise ValueError(f"Invalid field name {name!r}")
        self.name = name
        self.data = np.asarray(data, dtype=float)
        if fieldtype == 'auto':
            fieldtype = 'vector' if self.data.ndim == 2 else 'scalar'
        if fieldtype == 'scalar':
            if self.data.ndim != 1:
                raise ValueError(f"Scalar field '{name}' needs a 1D array, got shape {self.data.shape}")
        elif fieldtype == 'vector':
            if self.data.ndim != 2 or self.data.shape[1] not in (2, 3):
                raise ValueError(f"Vector field '{name}' needs an (n, 2) or (n, 3) array, got shape "
                                 f"{self.data.shape}")
        else:
            raise ValueError("fieldtype needs to be either 'scalar', 'vector' or 'auto'")
        if not np.all(np.isfinite(self.data)):
            raise ValueError(f"Field '{name}' has non finite values")
        self.fieldtype = fieldtype

    def __len__(self):
        return len(self.data)


class VtkWrite(object):
    """
    This class represents the VTK file being generated. Fields are added with :meth:`add_field` and written by
    :meth:`save`.

    :param mesh: the mesh the fields live on
    :type mesh: PolygonalMesh
    :param title: header line of the file. Line breaks are replaced by spaces.
    :type title: str
    """

    def __init__(self, mesh: PolygonalMesh, title: Optional[str] = None):
        self.mesh = mesh
        self.title = ' '.join((title or 'swgstokes fields').split())
        self._fields: List[CellField] = []

    @property
    def field_names(self) -> List[str]:
        return [field.name for field in self._fields]

    def add_field(self, field: CellField):
        """
        Adds a cell field. It needs to have one entry per cell of the mesh and a name not used yet.

        :param field: field to add
        :type field: CellField
        :return: Nothing
        """
        assert isinstance(field, CellField), "The field needs to be of the type ""CellField"""
        if len(field) != self.mesh.n_cells:
            raise IndexError(f"Field '{field.name}' has {len(field)} values for {self.mesh.n_cells} cells")
        if field.name in self.field_names:
            raise ValueError(f"Field '{field.name}' was already added")
        self._fields.append(field)

    def lines(self) -> List[str]:
        """Lines of the file, without line terminators"""
        mesh = self.mesh
        out = ["# vtk DataFile Version 3.0", self.title, "ASCII", "DATASET UNSTRUCTURED_GRID"]
        out.append(f"POINTS {mesh.n_vertices} double")
        for x, y in mesh.vertex_coordinates:
            out.append(f"{_fmt(x)} {_fmt(y)} 0")
        size = sum(len(cell.vertices) + 1 for cell in mesh.cells)
        out.append(f"CELLS {mesh.n_cells} {size}")
        for cell in mesh.cells:
            out.append(' '.join(str(k) for k in (len(cell.vertices), *cell.vertices)))
        out.append(f"CELL_TYPES {mesh.n_cells}")
        out.extend([str(VTK_POLYGON)] * mesh.n_cells)
        if self._fields:
            out.append(f"CELL_DATA {mesh.n_cells}")
        for field in self._fields:
            if field.fieldtype == 'scalar':
                out.append(f"SCALARS {field.name} double 1")
                out.append("LOOKUP_TABLE default")
                out.extend(_fmt(value) for value in field.data)
            else:
                out.append(f"VECTORS {field.name} double")
                for row in field.data:
                    z = row[2] if len(row) == 3 else 0.0
                    out.append(f"{_fmt(row[0])} {_fmt(row[1])} {_fmt(z)}")
        return out

    def save(self, filename: Union[str, pathlib.Path]):
        """
        Saves the VTK file. The format is always ASCII.

        :param filename: path of the file. The extension should be .vtk.
        :type filename: str or pathlib.Path
        :return: Nothing
        """
        with open(filename, 'w', encoding='ascii', newline='\n') as f:
            f.write('\n'.join(self.lines()))
            f.write('\n')
        _logger.info("VTK file with %d cells and fields %s written to %s", self.mesh.n_cells, self.field_names,
                     filename)

#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        matrix_market.py
# Purpose:     Dumps an assembled system in Matrix Market format
#
# Author:      swgstokes developers
#
# Created:     05-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
import logging
import pathlib
from typing import Tuple, Union

import numpy as np
import scipy.io
import scipy.sparse as sp

from .assembler import SaddleSystem

__all__ = ['dump_system']

_logger = logging.getLogger("swgstokes.Assembly")


def dump_system(system: SaddleSystem, path: Union[str, pathlib.Path]) -> Tuple[pathlib.Path, pathlib.Path]:
    """
    Writes the matrix as a Matrix Market coordinate file, entries sorted by (row, col), and the right hand side as a
    text file with one value per line next to it (``<path>.rhs``). The ``.mtx`` extension is added to the matrix
    file name when missing.

    :param system: system to dump
    :param path: output path
    :return: the paths of the matrix file and of the right hand side file
    """
    path = pathlib.Path(path)
    matrix_path = path if path.suffix == '.mtx' else path.with_name(path.name + '.mtx')
    rhs_path = path.with_name(path.name + '.rhs')
    matrix = sp.csr_matrix(system.matrix, copy=True)
    matrix.sort_indices()
    scipy.io.mmwrite(str(matrix_path), matrix.tocoo(), comment=f"{system.mode} saddle system, kappa={system.kappa:g}",
                     field='real', precision=17, symmetry='general')
    np.savetxt(rhs_path, system.rhs, fmt='%.17g')
    _logger.info("System of size %d written to %s", system.size, matrix_path)
    return matrix_path, rhs_path

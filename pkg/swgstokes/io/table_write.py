#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        table_write.py
# Purpose:     Write convergence tables as CSV files
#
# Author:      swgstokes developers
#
# Created:     11-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------

"""
Convergence tables are written twice: ``<case>_table.csv`` with three significant digits, laid out as the reference
tables (one error column and one order column per norm), and ``<case>_table_full.csv`` with every norm at full
precision and the solver statistics of each row.
"""

__all__ = ['TABLE_HEADER', 'format_error', 'format_order', 'write_csv', 'write_table', 'write_full_table',
           'write_table_files']

import csv
import logging
import pathlib
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..analysis.convergence import TABLE_NORMS, ConvergenceTable
from ..analysis.error_norms import ErrorReport

_logger = logging.getLogger("swgstokes.TableWrite")

PathLike = Union[str, pathlib.Path]

TABLE_HEADER = ('n', '||u_h-u||_0', 'r', '||u_h-u||_1', 'r', '||v_h-v||_0', 'r', '||v_h-v||_1', 'r',
                '||p_h-p||_0', 'r')


def format_error(value: Optional[float]) -> str:
    """Scientific notation with 3 significant digits, empty for missing values"""
    return '' if value is None else f"{value:.2e}"


def format_order(value: Optional[float]) -> str:
    return '' if value is None else f"{value:.2f}"


def _full(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return '%.17g' % value


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]]) -> pathlib.Path:
    """Writes a CSV file with '\\n' line terminators"""
    path = pathlib.Path(path)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
    _logger.debug("Wrote %s", path)
    return path


def write_table(table: ConvergenceTable, path: PathLike) -> pathlib.Path:
    """Writes the short table: errors with 3 significant digits and orders with 2 decimals"""
    columns = [(table.errors(norm), table.orders(norm)) for norm in TABLE_NORMS]
    rows = []
    for k, n in enumerate(table.ns):
        row = [str(n)]
        for errors, orders in columns:
            row.append(format_error(errors[k]))
            row.append(format_order(orders[k]))
        rows.append(row)
    return write_csv(path, TABLE_HEADER, rows)


def write_full_table(table: ConvergenceTable, path: PathLike) -> pathlib.Path:
    """Writes every norm of every row at full precision, with the observed orders and the solver statistics"""
    norms: List[str] = list(ErrorReport().as_dict())
    header = ['n', 'h'] + norms + [f'r_{norm}' for norm in TABLE_NORMS] + \
             ['iterations', 'relative_residual', 'converged']
    orders = {norm: table.orders(norm) for norm in TABLE_NORMS}
    rows = []
    for k, row in enumerate(table.rows):
        errors = row.errors.as_dict()
        line = [_full(row.n), _full(row.h)]
        line += [_full(errors[norm]) for norm in norms]
        line += [_full(orders[norm][k]) for norm in TABLE_NORMS]
        line += [_full(row.report.iterations), _full(row.report.relative_residual), _full(row.report.converged)]
        rows.append(line)
    return write_csv(path, header, rows)


def write_table_files(table: ConvergenceTable, out_dir: PathLike) -> Tuple[pathlib.Path, pathlib.Path]:
    """
    Writes both tables of a convergence study in a directory, which is created when missing.

    :return: paths of the short and of the full table
    """
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    short = write_table(table, out_dir / f"{table.case}_table.csv")
    full = write_full_table(table, out_dir / f"{table.case}_table_full.csv")
    _logger.info("Convergence table of %s written to %s and %s", table.case, short, full)
    return short, full

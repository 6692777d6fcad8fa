#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        exact_solutions.py
# Purpose:     Analytic Stokes solutions used to verify the solver
#
# Author:      swgstokes developers
#
# Created:     08-09-2026
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Analytic solutions of ``-Laplace(u) + grad(p) = f, div(u) = 0`` with the body force worked out by hand.

    case1   on (0, pi)^2
            u1 = sin^2(x) cos(y) sin(y), u2 = -cos(x) sin(x) sin^2(y), p = cos(x) cos(y)
    case2   on (0, 1)^2, with a(t) = t^4 - 2 t^3 + t^2
            u1 = -128 a(x) a'(y), u2 = 128 a(y) a'(x), p = 150 (x - 1/2) (y - 1/2)
    patch   on (0, 1)^2, u = (x + y, x - y), p = 0, f = 0. Any consistent scheme reproduces it exactly.

The velocity vanishes on the boundary for case1 and case2. All pressures have zero mean on their domain.

The lid driven cavity has no analytic solution; :func:`cavity_boundary_data` gives its Dirichlet data.

:func:`check_forcing` compares the hand written forcing and gradients with central differences of the velocity
and pressure, and must pass before an error table is trusted.
"""

__all__ = ['ExactSolution', 'get_case', 'check_forcing', 'cavity_boundary_data', 'EXACT_CASES']

import dataclasses
import logging
import math
from typing import Callable, Tuple

import numpy as np

from ..assembly.assembler import BoundaryData
from ..mesh.polygonal_mesh import PolygonalMesh

_logger = logging.getLogger("swgstokes.Analysis")

Field = Callable[[np.ndarray, np.ndarray], np.ndarray]
Pair = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclasses.dataclass(frozen=True)
class ExactSolution:
    name: str
    domain: Tuple[Tuple[float, float], Tuple[float, float]]
    u1: Field
    u2: Field
    p: Field
    f1: Field
    f2: Field
    grad_u1: Pair
    grad_u2: Pair

    def velocity(self, x, y):
        return self.u1(x, y), self.u2(x, y)

    @property
    def forcing(self) -> Tuple[Field, Field]:
        return self.f1, self.f2


def _case1() -> ExactSolution:
    sin, cos = np.sin, np.cos
    return ExactSolution(
        'case1', ((0.0, math.pi), (0.0, math.pi)),
        u1=lambda x, y: sin(x) ** 2 * cos(y) * sin(y),
        u2=lambda x, y: -cos(x) * sin(x) * sin(y) ** 2,
        p=lambda x, y: cos(x) * cos(y),
        f1=lambda x, y: sin(2 * y) * (1 - 2 * cos(2 * x)) - sin(x) * cos(y),
        f2=lambda x, y: sin(2 * x) * (2 * cos(2 * y) - 1) - cos(x) * sin(y),
        grad_u1=lambda x, y: (0.5 * sin(2 * x) * sin(2 * y), sin(x) ** 2 * cos(2 * y)),
        grad_u2=lambda x, y: (-cos(2 * x) * sin(y) ** 2, -0.5 * sin(2 * x) * sin(2 * y)),
    )


def _a(t):
    return t ** 4 - 2 * t ** 3 + t ** 2


def _a1(t):
    return 4 * t ** 3 - 6 * t ** 2 + 2 * t


def _a2(t):
    return 12 * t ** 2 - 12 * t + 2


def _a3(t):
    return 24 * t - 12


def _case2() -> ExactSolution:
    return ExactSolution(
        'case2', ((0.0, 1.0), (0.0, 1.0)),
        u1=lambda x, y: -128 * _a(x) * _a1(y),
        u2=lambda x, y: 128 * _a(y) * _a1(x),
        p=lambda x, y: 150 * (x - 0.5) * (y - 0.5),
        f1=lambda x, y: 128 * (_a2(x) * _a1(y) + _a(x) * _a3(y)) + 150 * (y - 0.5),
        f2=lambda x, y: -128 * (_a(y) * _a3(x) + _a2(y) * _a1(x)) + 150 * (x - 0.5),
        grad_u1=lambda x, y: (-128 * _a1(x) * _a1(y), -128 * _a(x) * _a2(y)),
        grad_u2=lambda x, y: (128 * _a(y) * _a2(x), 128 * _a1(x) * _a1(y)),
    )


def _patch() -> ExactSolution:
    zero = (lambda x, y: np.zeros(np.shape(x)))
    one = (lambda x, y: np.ones(np.shape(x)))
    return ExactSolution(
        'patch', ((0.0, 1.0), (0.0, 1.0)),
        u1=lambda x, y: x + y,
        u2=lambda x, y: x - y,
        p=zero, f1=zero, f2=zero,
        grad_u1=lambda x, y: (one(x, y), one(x, y)),
        grad_u2=lambda x, y: (one(x, y), -one(x, y)),
    )


EXACT_CASES = {
    'case1': _case1,
    'case2': _case2,
    'patch': _patch,
}


def get_case(name: str) -> ExactSolution:
    """
    Returns one of the analytic solutions: 'case1', 'case2' or 'patch'.

    :raises KeyError: for other names
    """
    try:
        return EXACT_CASES[str(getattr(name, 'value', name))]()
    except KeyError:
        raise KeyError(f"No analytic solution named {name!r}. Known cases: {', '.join(EXACT_CASES)}")


def check_forcing(case: ExactSolution, points, step: float = 1e-5) -> float:
    """
    Checks the hand written derivatives of a case with central differences at the given points.

    The gradients are compared with differences of the velocity, then ``-Laplace(u) + grad(p)`` is formed from
    differences of the analytic gradients and of the pressure and compared with the forcing.

    :param case: analytic solution
    :param points: K x 2 array of evaluation points
    :param step: difference step
    :return: largest discrepancy relative to max(1, largest value of the compared quantity)
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]

    def dx(fun):
        return (fun(x + step, y) - fun(x - step, y)) / (2 * step)

    def dy(fun):
        return (fun(x, y + step) - fun(x, y - step)) / (2 * step)

    def component(fun, k):
        return lambda xx, yy: np.asarray(fun(xx, yy)[k], dtype=float)

    discrepancy = 0.0
    for u, grad in ((case.u1, case.grad_u1), (case.u2, case.grad_u2)):
        gx, gy = (np.asarray(g, dtype=float) for g in grad(x, y))
        scale = max(1.0, float(np.max(np.abs(np.concatenate((gx, gy))))))
        discrepancy = max(discrepancy, float(np.max(np.abs(dx(u) - gx))) / scale,
                          float(np.max(np.abs(dy(u) - gy))) / scale)

    for f, grad, dp in ((case.f1, case.grad_u1, dx), (case.f2, case.grad_u2, dy)):
        laplacian = dx(component(grad, 0)) + dy(component(grad, 1))
        approx = -laplacian + dp(case.p)
        exact = np.asarray(f(x, y), dtype=float)
        scale = max(1.0, float(np.max(np.abs(exact))))
        discrepancy = max(discrepancy, float(np.max(np.abs(approx - exact))) / scale)

    _logger.debug("Forcing check of %s: discrepancy %.3e", case.name, discrepancy)
    return discrepancy


def cavity_boundary_data(mesh: PolygonalMesh, lid: float = 1.0) -> BoundaryData:
    """
    Dirichlet data of the lid driven cavity: u = (lid, 0) on the boundary edges lying on the top side of the
    bounding box, zero elsewhere. Values live at edge midpoints, so there is no corner value to choose.
    """
    (_, _), (y0, y1) = mesh.bounding_box()
    g_u = np.zeros(mesh.n_edges)
    g_v = np.zeros(mesh.n_edges)
    tol = 1e-12 * (y1 - y0)
    for e in mesh.boundary_edges:
        a, b = mesh.edges[e].endpoints
        if abs(mesh.vertices[a].y - y1) <= tol and abs(mesh.vertices[b].y - y1) <= tol:
            g_u[e] = lid
    return BoundaryData(g_u, g_v)

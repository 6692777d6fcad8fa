#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
# Name:        test_assembly.py
# Purpose:     Unit tests of the global SWG assembly
#
# Author:      swgstokes developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
@file:          test_assembly.py
@date:          2026-09-15

@note           swgstokes assembly unit test. Sizes, symmetry, independence from the cell order and exactness for
                linear divergence free velocities.
                  run ./unittests/test_assembly.py
"""

import os  # platform independent paths
import sys  # python path handling
import tempfile
import unittest  # performs test

import numpy as np
import scipy.io
import scipy.sparse as sp
from numpy.testing import assert_allclose, assert_array_equal

sys.path.append(
    os.path.abspath((os.path.dirname(os.path.abspath(__file__)) + "/../")))  # add project root to lib search path
from swgstokes.analysis import get_case
from swgstokes.assembly import (BoundaryCompatibilityError, BoundaryData, DimensionMismatchError, accumulate_matrix,
                                accumulate_vector, assemble, dump_system, lift_solution, number_dofs)
from swgstokes.mesh import PolygonalMesh, build_perturbed_quad_mesh, build_uniform_rect_mesh, regular_polygon_mesh


def exact_unknowns(system, mesh, case):
    """Vector of unknowns holding the exact velocity at the interior edge midpoints and p = 0"""
    dofs = system.dof_map
    x = np.zeros(system.size)
    mid = mesh.edge_midpoints[dofs.interior_edges]
    x[dofs.u_dofs[dofs.interior_edges]] = case.u1(mid[:, 0], mid[:, 1])
    x[dofs.v_dofs[dofs.interior_edges]] = case.u2(mid[:, 0], mid[:, 1])
    return x


class test_assembly(unittest.TestCase):
    """Structure of the assembled system"""

    def test_sizes(self):
        for n, size in ((1, 1), (2, 12), (4, 64)):
            mesh = build_uniform_rect_mesh(n)
            system = assemble(mesh, 4.0)
            self.assertEqual(system.size, size)
            self.assertEqual(system.matrix.shape, (size, size))
            self.assertEqual(system.n_pressure, n * n)
        dofs = number_dofs(build_uniform_rect_mesh(4))
        self.assertEqual(dofs.n_interior, 24)
        self.assertEqual(dofs.p_dof(0), 48)

    def test_symmetry(self):
        for mesh in (build_uniform_rect_mesh(4), build_perturbed_quad_mesh(5, amplitude=0.2, seed=3)):
            matrix = assemble(mesh, 3.0).matrix
            self.assertEqual((matrix != matrix.T).nnz, 0)
            self.assertTrue(matrix.has_sorted_indices)

    def test_pressure_block_is_zero(self):
        system = assemble(build_uniform_rect_mesh(4), 4.0)
        pp = system.matrix[system.pressure_slice, system.pressure_slice]
        self.assertEqual(np.count_nonzero(pp.toarray()), 0)

    def test_velocity_block_definite(self):
        system = assemble(build_uniform_rect_mesh(2), 4.0)
        self.assertGreater(np.linalg.eigvalsh(system.velocity_block().toarray()).min(), 0.0)

    def test_constant_forcing(self):
        mesh = build_uniform_rect_mesh(2)
        one = (lambda x, y: np.ones(np.shape(x)))
        system = assemble(mesh, 4.0, f=(one, None))
        dofs = system.dof_map
        assert_allclose(system.rhs[dofs.u_dofs[dofs.interior_edges]], 0.125, atol=1e-15)
        assert_allclose(system.rhs[dofs.v_dofs[dofs.interior_edges]], 0.0, atol=1e-15)
        assert_allclose(system.rhs[system.pressure_slice], 0.0, atol=1e-15)

    def test_cell_order(self):
        mesh = build_perturbed_quad_mesh(4, amplitude=0.15, seed=7)
        loops = [cell.vertices for cell in mesh.cells]
        reversed_mesh = PolygonalMesh.from_polygons(mesh.vertex_coordinates, loops[::-1])
        first = assemble(mesh, 4.0)
        second = assemble(reversed_mesh, 4.0)
        # velocity unknowns keep their ids, cell c becomes cell n_cells - 1 - c
        nv, nc = first.n_velocity, first.n_pressure
        perm = np.concatenate((np.arange(nv), nv + np.arange(nc)[::-1]))
        permuted = second.matrix[perm][:, perm]
        assert_array_equal(first.matrix.toarray(), permuted.toarray())
        assert_array_equal(first.rhs, second.rhs[perm])

    def test_loop_start(self):
        mesh = build_perturbed_quad_mesh(4, amplitude=0.15, seed=7)
        rotated = [cell.vertices[1:] + cell.vertices[:1] for cell in mesh.cells]
        other = PolygonalMesh.from_polygons(mesh.vertex_coordinates, rotated)
        case = get_case('case2')
        bc = BoundaryData.from_function(mesh, case.velocity)
        first = assemble(mesh, 4.0, f=case.forcing, bc=bc)
        second = assemble(other, 4.0, f=case.forcing, bc=bc)
        assert_allclose(first.matrix.toarray(), second.matrix.toarray(), atol=1e-12)
        assert_allclose(first.rhs, second.rhs, atol=1e-12)

    def test_kappa(self):
        with self.assertRaises(ValueError):
            assemble(build_uniform_rect_mesh(2), -1.0)


class test_boundary_data(unittest.TestCase):
    """Dirichlet data"""

    def test_net_flux(self):
        mesh = build_uniform_rect_mesh(4)
        bc = BoundaryData.from_function(mesh, lambda x, y: (x, np.zeros(np.shape(x))))
        self.assertAlmostEqual(bc.net_flux(mesh), 1.0, places=14)
        with self.assertRaises(BoundaryCompatibilityError):
            assemble(mesh, 4.0, bc=bc)

    def test_interior_values_ignored(self):
        mesh = build_uniform_rect_mesh(2)
        bc = BoundaryData.from_function(mesh, lambda x, y: (x + y, x - y))
        self.assertTrue(np.all(bc.g_u[list(mesh.interior_edges)] == 0.0))

    def test_size_mismatch(self):
        mesh = build_uniform_rect_mesh(2)
        with self.assertRaises(DimensionMismatchError):
            assemble(mesh, 4.0, bc=BoundaryData(np.zeros(3), np.zeros(3)))


class test_patch_consistency(unittest.TestCase):
    """The exact linear divergence free traces with zero pressure satisfy every equation"""

    def check(self, mesh):
        case = get_case('patch')
        bc = BoundaryData.from_function(mesh, case.velocity)
        system = assemble(mesh, 4.0, f=case.forcing, bc=bc)
        x = exact_unknowns(system, mesh, case)
        residual = system.matrix @ x - system.rhs
        scale = max(1.0, abs(system.matrix).max()) * max(1.0, np.abs(x).max())
        self.assertLessEqual(np.abs(residual).max(), 1e-12 * scale * np.sqrt(system.size))

    def test_uniform(self):
        for n in (2, 4, 8):
            self.check(build_uniform_rect_mesh(n))

    def test_perturbed(self):
        for seed in (1, 2):
            self.check(build_perturbed_quad_mesh(8, amplitude=0.2, seed=seed))

    def test_polygon_patch(self):
        # hexagon surrounded by nothing: no interior unknown, only the pressure equation
        mesh = regular_polygon_mesh(6, 0.4, center=(0.5, 0.5))
        self.check(mesh)


class test_lift(unittest.TestCase):
    """From unknowns to edge and cell values"""

    def test_lift(self):
        mesh = build_uniform_rect_mesh(2)
        case = get_case('patch')
        bc = BoundaryData.from_function(mesh, case.velocity)
        system = assemble(mesh, 4.0, bc=bc)
        raw = exact_unknowns(system, mesh, case)
        raw[system.pressure_slice] = [1.0, 2.0, 3.0, 4.0]
        solution = lift_solution(system, raw, bc)
        mid = mesh.edge_midpoints
        assert_allclose(solution.u, mid[:, 0] + mid[:, 1], atol=1e-15)
        assert_allclose(solution.v, mid[:, 0] - mid[:, 1], atol=1e-15)
        # unknowns hold -p
        assert_allclose(solution.p, [1.5, 0.5, -0.5, -1.5], atol=1e-15)

    def test_lift_mismatch(self):
        system = assemble(build_uniform_rect_mesh(2), 4.0)
        with self.assertRaises(DimensionMismatchError):
            lift_solution(system, np.zeros(system.size + 1))
        with self.assertRaises(DimensionMismatchError):
            lift_solution(system, np.zeros(system.size), BoundaryData(np.zeros(2), np.zeros(2)))


class test_accumulation(unittest.TestCase):
    """Triplet sums don't depend on the order of the triplets"""

    def test_matrix(self):
        rng = np.random.default_rng(11)
        rows = rng.integers(0, 6, size=400)
        cols = rng.integers(0, 6, size=400)
        vals = rng.standard_normal(400) * 10.0 ** rng.integers(-8, 8, size=400)
        reference = accumulate_matrix(rows, cols, vals, (6, 6))
        for _ in range(5):
            order = rng.permutation(400)
            other = accumulate_matrix(rows[order], cols[order], vals[order], (6, 6))
            assert_array_equal(reference.toarray(), other.toarray())
            assert_array_equal(reference.indices, other.indices)
        dense = np.zeros((6, 6))
        np.add.at(dense, (rows, cols), vals)
        assert_allclose(reference.toarray(), dense, rtol=1e-9, atol=1e-4)

    def test_vector(self):
        rng = np.random.default_rng(12)
        rows = rng.integers(0, 10, size=300)
        vals = rng.standard_normal(300)
        reference = accumulate_vector(rows, vals, 12)
        order = rng.permutation(300)
        assert_array_equal(reference, accumulate_vector(rows[order], vals[order], 12))
        self.assertEqual(reference[10], 0.0)
        self.assertEqual(reference[11], 0.0)

    def test_empty(self):
        self.assertEqual(accumulate_matrix([], [], [], (3, 3)).nnz, 0)
        assert_array_equal(accumulate_vector([], [], 3), np.zeros(3))


class test_dump(unittest.TestCase):
    """Matrix Market dump"""

    def test_dump_system(self):
        mesh = build_uniform_rect_mesh(4)
        case = get_case('case2')
        system = assemble(mesh, 4.0, f=case.forcing, bc=BoundaryData.from_function(mesh, case.velocity))
        with tempfile.TemporaryDirectory() as tmp:
            matrix_path, rhs_path = dump_system(system, os.path.join(tmp, 'system'))
            self.assertTrue(str(matrix_path).endswith('system.mtx'))
            matrix = sp.csr_matrix(scipy.io.mmread(str(matrix_path)))
            rhs = np.loadtxt(rhs_path)
        assert_array_equal(matrix.toarray(), system.matrix.toarray())
        assert_array_equal(rhs, system.rhs)


if __name__ == '__main__':
    unittest.main()

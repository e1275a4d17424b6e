import numpy as np
from django.test import SimpleTestCase

from core.exceptions import SingularSystem, SystemShapeError
from core.linalg import bandwidths, equilibrate, solve_interface_system, to_banded


def banded_matrix(rng, n, lower, upper):
    matrix = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rows, cols = np.indices((n, n))
    matrix[(cols - rows > upper) | (rows - cols > lower)] = 0
    return matrix + 4 * np.eye(n)


class BandedSolveTests(SimpleTestCase):

    def test_bandwidths(self):
        rng = np.random.default_rng(1)
        self.assertEqual(bandwidths(banded_matrix(rng, 8, 2, 3)), (2, 3))
        self.assertEqual(bandwidths(np.zeros((3, 3))), (0, 0))

    def test_banded_storage(self):
        rng = np.random.default_rng(2)
        matrix = banded_matrix(rng, 6, 1, 2)
        ab = to_banded(matrix, 1, 2)
        for i, j in zip(*np.nonzero(matrix)):
            self.assertEqual(ab[2 + i - j, j], matrix[i, j])

    def test_matches_dense_solve(self):
        rng = np.random.default_rng(3)
        matrix = banded_matrix(rng, 12, 3, 3)
        rhs = rng.normal(size=(12, 2)) + 1j * rng.normal(size=(12, 2))
        x, _ = solve_interface_system(matrix, rhs)
        np.testing.assert_allclose(x, np.linalg.solve(matrix, rhs), rtol=1e-12, atol=1e-14)
        single, _ = solve_interface_system(matrix, rhs[:, 0])
        self.assertEqual(single.shape, (12,))
        np.testing.assert_allclose(single, x[:, 0], rtol=1e-14)

    def test_condition_estimate_is_a_lower_bound(self):
        rng = np.random.default_rng(4)
        matrix = banded_matrix(rng, 10, 2, 2)
        _, cond = solve_interface_system(matrix, np.ones(10))
        scaled, _, _ = equilibrate(matrix)
        exact = np.linalg.cond(scaled, 1)
        self.assertLessEqual(cond, exact * (1 + 1e-10))
        self.assertGreaterEqual(cond, exact / 1000)

    def test_nearly_singular_system(self):
        matrix = np.array([[1.0, 1.0, 0.0], [1.0, 1.0 + 1e-13, 0.0], [0.0, 1.0, 2.0]])
        with self.assertRaises(SingularSystem) as caught:
            solve_interface_system(matrix, np.ones(3), condition_limit=1e8, k_rho=0.7)
        self.assertEqual(caught.exception.k_rho, 0.7)

    def test_shape_errors(self):
        with self.assertRaises(SystemShapeError):
            solve_interface_system(np.ones((2, 3)), np.ones(2))
        with self.assertRaises(SystemShapeError):
            solve_interface_system(np.eye(3), np.ones(2))

    def test_empty_system(self):
        x, cond = solve_interface_system(np.zeros((0, 0)), np.zeros((0, 2)))
        self.assertEqual(x.shape, (0, 2))
        self.assertEqual(cond, 1.0)

# basis_algebra/tests.py
import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DegenerateSpectralPoint
from .basis import (
    DEGREES, basis_class, decompose, decompose_vector, realize, realize_basis,
    realize_scaled, realize_unit_basis, realize_vector, realize_vector_basis, scale_coefficients,
)
from .models import BasisClass, BasisCoefficients, SpectralPoint, VectorBasisCoefficients
from .products import (
    ensure_product_table, filtered_solve, multiply_in_basis, product_residuals,
    product_rule_class, selfcheck_points,
)


def random_coefficients(rng, restricted=False):
    values = rng.normal(size=9) + 1j * rng.normal(size=9)
    if restricted:
        values[5:] = 0
    return BasisCoefficients(values, restricted=restricted)


class RealizeBasisTests(SimpleTestCase):

    def test_identity_block(self):
        point = SpectralPoint(0.4, -1.7)
        np.testing.assert_array_equal(realize_basis(1, point), np.diag([1, 1, 0]))

    def test_j5_on_kx_axis(self):
        expected = np.zeros((3, 3), dtype=complex)
        expected[0, 0] = -1
        np.testing.assert_array_equal(realize_basis(5, SpectralPoint(1.0, 0.0)), expected)

    def test_j9_is_antisymmetric(self):
        m = realize_basis(9, SpectralPoint(2.5, 0.3))
        self.assertEqual(m[0, 1], 1)
        self.assertEqual(m[1, 0], -1)
        self.assertEqual(np.count_nonzero(m), 2)

    def test_rejects_bad_index(self):
        with self.assertRaises(ValueError):
            realize_basis(10, SpectralPoint(1.0, 0.0))

    def test_unit_basis_matches_scaled_basis(self):
        point = SpectralPoint.from_polar(2.0, 0.7)
        for index in range(1, 10):
            np.testing.assert_allclose(
                realize_unit_basis(index, 0.7) * 2.0 ** DEGREES[index - 1],
                realize_basis(index, point), atol=1e-14,
            )

    def test_unit_basis_is_defined_at_origin(self):
        m = realize_scaled(np.eye(9)[4], 0.0)
        self.assertEqual(m[0, 0], -1)

    def test_vector_basis_is_third_column(self):
        point = SpectralPoint(0.3, 0.8)
        vector = realize_vector(VectorBasisCoefficients(1.0, 2.0, 3.0), point)
        expected = (realize_basis(2, point) + 2 * realize_basis(3, point) + 3 * realize_basis(7, point))[:, 2]
        np.testing.assert_allclose(vector, expected, atol=1e-15)

    def test_vector_basis_elements(self):
        point = SpectralPoint(0.3, 0.8)
        np.testing.assert_array_equal(realize_vector_basis(2, point), [0, 0, 1])
        np.testing.assert_array_equal(realize_vector_basis(3, point), [0.3j, 0.8j, 0])
        np.testing.assert_array_equal(realize_vector_basis(7, point), [0.8j, -0.3j, 0])
        with self.assertRaises(ValueError):
            realize_vector_basis(5, point)


class ProductTableTests(SimpleTestCase):

    def test_table_matches_realized_products(self):
        kx, ky = selfcheck_points(200, seed=11)
        self.assertLessEqual(product_residuals(kx, ky).max(), 1e-13)

    def test_startup_check_passes(self):
        self.assertLessEqual(ensure_product_table(), 1e-13)

    def test_j3_times_j4(self):
        product = multiply_in_basis(BasisCoefficients.unit(3), BasisCoefficients.unit(4), 2.0)
        np.testing.assert_array_equal(product.values, BasisCoefficients.unit(5).values)

    def test_j4_times_j3(self):
        product = multiply_in_basis(BasisCoefficients.unit(4), BasisCoefficients.unit(3), 2.0)
        self.assertEqual(product[2], -2.0)
        self.assertEqual(np.count_nonzero(product.values), 1)

    def test_disjoint_diagonals(self):
        product = multiply_in_basis(BasisCoefficients.unit(1), BasisCoefficients.unit(2), 5.0)
        self.assertEqual(np.count_nonzero(product.values), 0)

    def test_restricted_products_stay_restricted(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = random_coefficients(rng, restricted=True)
            b = random_coefficients(rng, restricted=True)
            product = multiply_in_basis(a, b, rng.uniform(0.1, 9.0))
            self.assertTrue(product.restricted)
            self.assertTrue(np.all(product.values[5:] == 0))

    def test_agrees_with_decomposed_product(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            point = SpectralPoint(*rng.uniform(-2, 2, size=2))
            a, b = random_coefficients(rng), random_coefficients(rng)
            expected = decompose(realize(a, point) @ realize(b, point), point)
            product = multiply_in_basis(a, b, point.k_rho_sq)
            self.assertTrue(product.allclose(expected, rtol=1e-11), (product, expected))


class DecomposeTests(SimpleTestCase):

    def test_basis_element_round_trip(self):
        point = SpectralPoint(1.0, 0.0)
        coefficients = decompose(realize_basis(5, point), point)
        np.testing.assert_allclose(coefficients.values, np.eye(9)[4], atol=1e-14)

    def test_identity(self):
        coefficients = decompose(np.eye(3), SpectralPoint(0.7, -0.3))
        np.testing.assert_allclose(coefficients.values, [1, 1, 0, 0, 0, 0, 0, 0, 0], atol=1e-14)

    def test_random_matrix_round_trip(self):
        rng = np.random.default_rng(7)
        point = SpectralPoint(0.7, -0.3)
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rebuilt = realize(decompose(m, point), point)
        self.assertLessEqual(np.abs(rebuilt - m).max(), 1e-12 * np.abs(m).max())

    def test_coefficient_round_trip_across_scales(self):
        rng = np.random.default_rng(9)
        for k_rho in np.logspace(-3, 3, 13):
            point = SpectralPoint.from_polar(k_rho, rng.uniform(0, 2 * np.pi))
            scaled = rng.normal(size=9) + 1j * rng.normal(size=9)
            coefficients = BasisCoefficients(scaled / k_rho ** DEGREES)
            recovered = scale_coefficients(decompose(realize(coefficients, point), point), k_rho)
            self.assertLessEqual(
                np.abs(recovered.values - scaled).max(), 1e-12 * np.linalg.norm(scaled), k_rho,
            )

    def test_degenerate_point_is_refused(self):
        with self.assertRaises(DegenerateSpectralPoint):
            decompose(np.eye(3), SpectralPoint(1e-10, 0.0))

    def test_vector_decomposition(self):
        point = SpectralPoint(-0.2, 1.1)
        v = np.array([1 + 2j, -0.5j, 3.0])
        coefficients = decompose_vector(v, point)
        np.testing.assert_allclose(realize_vector(coefficients, point), v, atol=1e-14)


class ClassRuleTests(SimpleTestCase):

    def test_product_classes(self):
        self.assertEqual(product_rule_class(BasisClass.R, BasisClass.R), BasisClass.R)
        self.assertEqual(product_rule_class(BasisClass.I, BasisClass.I), BasisClass.R)
        self.assertEqual(product_rule_class(BasisClass.R, BasisClass.I), BasisClass.I)
        self.assertEqual(product_rule_class('I', 'R'), BasisClass.I)

    def test_mixed_has_no_class_product(self):
        with self.assertRaises(ValueError):
            product_rule_class(BasisClass.MIXED, BasisClass.R)

    def test_table_respects_class_rule(self):
        for u in range(1, 10):
            for v in range(1, 10):
                product = multiply_in_basis(BasisCoefficients.unit(u), BasisCoefficients.unit(v), 1.7)
                if not np.any(product.values):
                    continue
                expected = product_rule_class(
                    basis_class(BasisCoefficients.unit(u)), basis_class(BasisCoefficients.unit(v)),
                )
                self.assertEqual(basis_class(product), expected, (u, v))


class FilteredSolveTests(SimpleTestCase):

    def test_matches_dense_solve(self):
        rng = np.random.default_rng(13)
        point = SpectralPoint(0.9, -0.6)
        n = 3
        blocks = [[random_coefficients(rng, restricted=True) for _ in range(n)] for _ in range(n)]
        rhs = [random_coefficients(rng, restricted=True) for _ in range(n)]

        dense = np.block([[realize(b, point) for b in row] for row in blocks])
        dense_rhs = np.vstack([realize(r, point) for r in rhs])
        # 3n x 3n 的实现矩阵秩为 3n, 这里直接解
        x = np.linalg.solve(dense, dense_rhs)

        filtered = filtered_solve(blocks, rhs, point.k_rho_sq)
        for i, coefficients in enumerate(filtered):
            self.assertTrue(coefficients.restricted)
            np.testing.assert_allclose(realize(coefficients, point), x[3 * i:3 * i + 3], atol=1e-10)

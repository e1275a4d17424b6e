# maxwell/tests.py
import numpy as np
from django.test import SimpleTestCase
from scipy.optimize import brentq

from basis_algebra.basis import realize
from basis_algebra.models import SpectralPoint
from core.exceptions import BranchPoint, CoincidentDepths, DegenerateSpectralPoint, SingularSystem
from oracle.closed_form import spectral_free_GE, spectral_free_GH
from oracle.halfspace import oracle_halfspace_reflection
from stack.factories import random_em_stack, source_depth
from stack.models import DOWN, UP, LayerStack, Material, ProblemKind
from .assembly import assemble_GE, assemble_GH, b_profile, layer_terms
from .free_space import em_free_space_b
from .potentials import (
    field_from_potential, magnetic_from_potential, recover_sommerfeld_potential, recover_transverse_potential,
)
from .residuals import b3_identity_residual, em_interface_residuals, rotation_residual
from .solver import solve_em_spectral


def em_stack(interfaces, *pairs):
    return LayerStack(interfaces, tuple(Material.em(e, m) for e, m in pairs), ProblemKind.MAXWELL)


class FreeSpaceTests(SimpleTestCase):

    def test_half_period(self):
        b1, b2, _ = em_free_space_b(1.0, Material.em(1, 1), 0.0, np.pi, 0.0)
        self.assertAlmostEqual(b1, 0.5)
        self.assertAlmostEqual(b2, 0.5)

    def test_full_period(self):
        b1, _, _ = em_free_space_b(1.0, Material.em(1, 1), 0.0, 0.0, 2 * np.pi)
        self.assertAlmostEqual(b1, -0.5)

    def test_permeability_ratio(self):
        b1, b2, _ = em_free_space_b(2.0, Material.em(1, 2), 1.0, 0.3, -0.4)
        self.assertAlmostEqual(b2, b1 / 2)

    def test_b3_is_z_derivative_of_b2(self):
        material = Material.em(1.5, 1.2)
        z, h = 0.8, 1e-6
        _, _, b3 = em_free_space_b(1.0, material, 0.4, z, 0.0)
        _, plus, _ = em_free_space_b(1.0, material, 0.4, z + h, 0.0)
        _, minus, _ = em_free_space_b(1.0, material, 0.4, z - h, 0.0)
        self.assertAlmostEqual(b3, (plus - minus) / (2 * h), places=8)

    def test_coincident_depths(self):
        with self.assertRaises(CoincidentDepths):
            em_free_space_b(1.0, Material.em(1, 1), 0.5, 0.2, 0.2)

    def test_branch_point(self):
        with self.assertRaises(BranchPoint):
            em_free_space_b(1.0, Material.em(1, 1), 1.0, 0.2, 0.0)


class SolveTests(SimpleTestCase):

    def test_single_layer_has_no_reaction(self):
        sol = solve_em_spectral(em_stack([], (2, 1)), 1.0, 0.7, 0.0)
        self.assertFalse(np.any(sol.amplitudes))

    def test_identical_layers_do_not_reflect(self):
        sol = solve_em_spectral(em_stack([0.0], (2, 1.5), (2, 1.5)), 1.0, 0.7, 0.4)
        self.assertLessEqual(np.abs(sol.amplitudes[:, 0, UP]).max(), 1e-15)
        # 下层只剩透射波, 组装结果与单层一致
        single = solve_em_spectral(em_stack([], (2, 1.5)), 1.0, 0.7, 0.4)
        point = SpectralPoint.from_polar(0.7, 0.3)
        for z in (1.1, -0.9):
            np.testing.assert_allclose(
                assemble_GH(sol, point, z).matrix, assemble_GH(single, point, z).matrix, rtol=1e-12, atol=1e-15,
            )

    def test_radiation_zeros_are_exact(self):
        rng = np.random.default_rng(21)
        stack = random_em_stack(rng, 3)
        sol = solve_em_spectral(stack, 1.0, 0.9, source_depth(rng, stack, 2), loss=1e-3)
        self.assertTrue(np.all(sol.amplitudes[:, 0, DOWN] == 0))
        self.assertTrue(np.all(sol.amplitudes[:, -1, UP] == 0))
        self.assertTrue(np.all(sol.b1_r[0, DOWN] == 0))

    def test_halfspace_matches_two_by_two_solves(self):
        stack = em_stack([0.0], (1, 1), (4, 1))
        z_source = 0.5
        k_rhos = np.concatenate([np.linspace(0, 0.99, 12), [1.5, 2.5, 3.5]])
        for k_rho in k_rhos:
            sol = solve_em_spectral(stack, 1.0, k_rho, z_source)
            b1f, b2f, _ = em_free_space_b(1.0, stack.materials[0], k_rho, 0.0, z_source)
            r_te = oracle_halfspace_reflection('TE', stack.materials, 1.0, k_rho)
            r_tm = oracle_halfspace_reflection('TM', stack.materials, 1.0, k_rho)
            np.testing.assert_allclose(sol.amplitudes[0, 0, UP], r_te * b1f, rtol=1e-12)
            np.testing.assert_allclose(sol.amplitudes[1, 0, UP], r_tm * b2f, rtol=1e-12)

    def test_te_tm_duality(self):
        # 交换非源层的 eps 和 mu: k 不变, TE 和 TM 互换
        first = solve_em_spectral(em_stack([0.0, -1.0], (1, 1), (2, 1), (1.5, 3)), 1.3, 0.6, 0.4)
        second = solve_em_spectral(em_stack([0.0, -1.0], (1, 1), (1, 2), (3, 1.5)), 1.3, 0.6, 0.4)
        np.testing.assert_allclose(first.amplitudes[0], second.amplitudes[1], rtol=1e-13, atol=1e-16)
        self.assertGreater(np.abs(first.amplitudes[0] - second.amplitudes[0]).max(), 1e-3)

    def test_solution_ignores_azimuth(self):
        stack = em_stack([0.0, -0.8], (1, 1), (2.5, 1.2), (1.7, 0.9))
        z = -0.3
        self.assertEqual(rotation_residual(stack, 1.0, 0.8, 0.35, z, [0.0, 1.234, 2.5]), 0.0)

    def test_guided_mode_is_reported(self):
        # 对称介质板的 TE 导模: tan(h d / 2) = p / h
        k1, k0, thickness = 2.0, 1.0, 2.0

        def dispersion(beta):
            h, p = np.sqrt(k1 ** 2 - beta ** 2), np.sqrt(beta ** 2 - k0 ** 2)
            return h * np.tan(h * thickness / 2) - p

        beta = brentq(dispersion, 1.5, 1.95)
        stack = em_stack([1.0, -1.0], (1, 1), (4, 1), (1, 1))
        with self.assertRaises(SingularSystem) as caught:
            solve_em_spectral(stack, 1.0, beta, 0.0, condition_limit=1e8)
        self.assertAlmostEqual(caught.exception.k_rho, beta)


class AssemblyTests(SimpleTestCase):

    def setUp(self):
        self.material = Material.em(2.0, 1.5)
        self.single = em_stack([], (2.0, 1.5))

    def test_free_space_matches_closed_form(self):
        point = SpectralPoint(0.4, -0.9)
        sol = solve_em_spectral(self.single, 1.1, point.k_rho, 0.2)
        for z in (1.0, -0.5):
            np.testing.assert_allclose(
                assemble_GE(sol, point, z).matrix, spectral_free_GE(1.1, self.material, point, z, 0.2),
                rtol=1e-12, atol=1e-14,
            )
            np.testing.assert_allclose(
                assemble_GH(sol, point, z).matrix, spectral_free_GH(1.1, self.material, point, z, 0.2),
                rtol=1e-12, atol=1e-14,
            )

    def test_normal_incidence_matches_closed_form(self):
        point = SpectralPoint(0.0, 0.0)
        sol = solve_em_spectral(self.single, 1.1, 0.0, 0.2)
        assembled = assemble_GE(sol, point, 0.9)
        self.assertIsNone(assembled.coefficients)
        np.testing.assert_allclose(
            assembled.matrix, spectral_free_GE(1.1, self.material, point, 0.9, 0.2), rtol=1e-12, atol=1e-15,
        )

    def test_small_k_rho_is_continuous(self):
        stack = em_stack([0.0], (1, 1), (3, 1.2))
        at_zero = assemble_GE(solve_em_spectral(stack, 1.0, 0.0, 0.5), SpectralPoint(0.0, 0.0), 0.9).matrix
        near = assemble_GE(solve_em_spectral(stack, 1.0, 1e-7, 0.5), SpectralPoint(1e-7, 0.0), 0.9).matrix
        np.testing.assert_allclose(near, at_zero, rtol=1e-6, atol=1e-6)

    def test_coefficients_do_not_depend_on_azimuth(self):
        stack = em_stack([0.0], (1, 1), (3, 1.2))
        sol = solve_em_spectral(stack, 1.0, 0.6, 0.5)
        first = assemble_GE(sol, SpectralPoint.from_polar(0.6, 0.1), -0.4)
        second = assemble_GE(sol, SpectralPoint.from_polar(0.6, 0.1 + np.pi / 2), -0.4)
        np.testing.assert_array_equal(first.coefficients.values, second.coefficients.values)

    def test_gh_is_imaginary_class(self):
        stack = em_stack([0.0], (1, 1), (3, 1.2))
        sol = solve_em_spectral(stack, 1.0, 0.6, 0.5)
        values = assemble_GH(sol, SpectralPoint(0.6, 0.0), 0.1).coefficients.values
        self.assertTrue(np.all(values[:5] == 0))

    def test_transmitted_layer_has_no_free_term(self):
        stack = em_stack([0.0], (1, 1), (3, 1.2))
        sol = solve_em_spectral(stack, 1.0, 0.6, 0.5)
        value, dz = layer_terms(sol, 1, -0.7)
        self.assertFalse(np.any(value[0]))
        self.assertFalse(np.any(dz[0]))

    def test_coincident_target(self):
        sol = solve_em_spectral(self.single, 1.0, 0.6, 0.5)
        with self.assertRaises(CoincidentDepths):
            b_profile(sol, 0.5)


class ResidualTests(SimpleTestCase):

    def test_random_stacks_satisfy_interface_conditions(self):
        rng = np.random.default_rng(42)
        for trial in range(12):
            stack = random_em_stack(rng, int(rng.integers(1, 6)))
            j = int(rng.integers(0, stack.layer_count))
            z_source = source_depth(rng, stack, j)
            for k_rho in (0.1, 1.0, 3.0):
                sol = solve_em_spectral(stack, 1.0, k_rho, z_source, loss=1e-3)
                point = SpectralPoint.from_polar(k_rho, rng.uniform(0, 2 * np.pi))
                report = em_interface_residuals(sol, point)
                self.assertLessEqual(report.worst, 1e-10, (trial, k_rho, report.by_check()))
                self.assertEqual(report.radiation, 0.0)

    def test_perturbed_coefficients_fail(self):
        stack = em_stack([0.0, -1.0], (1, 1), (2, 1.5), (3, 1))
        sol = solve_em_spectral(stack, 1.0, 0.5, 0.3)
        report = em_interface_residuals(sol.perturbed(1e-3))
        self.assertGreaterEqual(report.worst, 1e-5)

    def test_helmholtz_equation(self):
        stack = em_stack([0.0, -1.0], (1, 1), (2, 1.5), (3, 1))
        sol = solve_em_spectral(stack, 1.0, 0.5, 0.3)
        z = -0.4
        h = 1e-5 * 2 * np.pi / abs(sol.k[1])
        values = [b_profile(sol, z + s * h).value for s in (-1, 0, 1)]
        second = (values[0] - 2 * values[1] + values[2]) / h ** 2
        kz = sol.kz[1]
        np.testing.assert_allclose(second, -kz ** 2 * values[1], rtol=1e-5)

    def test_b3_identity(self):
        stack = em_stack([0.0, -1.0], (1, 1), (2, 1.5), (3, 1))
        for k_rho in (0.2, 1.3, 2.5):
            self.assertLessEqual(b3_identity_residual(stack, 1.0, k_rho, 0.3, -0.5), 1e-6)
            self.assertLessEqual(b3_identity_residual(stack, 1.0, k_rho, 0.3, 0.9), 1e-6)


class PotentialTests(SimpleTestCase):

    def setUp(self):
        self.stack = em_stack([0.0, -1.0], (1, 1), (2, 1.5), (3, 1))
        self.omega = 1.2
        self.point = SpectralPoint.from_polar(0.7, 0.4)
        self.sol = solve_em_spectral(self.stack, self.omega, 0.7, 0.3)

    def check_reproduces_field(self, recover):
        for z in (0.9, -0.5, -1.6):
            potential = recover(self.sol, z)
            profile = b_profile(self.sol, z)
            k_sq = profile.k ** 2
            field = field_from_potential(potential, self.omega, k_sq, self.point.k_rho_sq)
            expected = assemble_GE(self.sol, self.point, z).coefficients
            self.assertTrue(field.allclose(expected, rtol=1e-10), (z, field, expected))
            magnetic = magnetic_from_potential(potential, profile.mu, self.point.k_rho_sq)
            self.assertTrue(magnetic.allclose(assemble_GH(self.sol, self.point, z).coefficients, rtol=1e-10))

    def test_transverse_potential_reproduces_field(self):
        self.check_reproduces_field(recover_transverse_potential)

    def test_sommerfeld_potential_reproduces_field(self):
        self.check_reproduces_field(recover_sommerfeld_potential)

    def test_transverse_pattern(self):
        matrix = realize(recover_transverse_potential(self.sol, -0.5).value, self.point)
        mask = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 1]], dtype=bool)
        self.assertTrue(np.all(matrix[~mask] == 0))
        self.assertEqual(np.count_nonzero(matrix), 5)

    def test_sommerfeld_pattern(self):
        matrix = realize(recover_sommerfeld_potential(self.sol, -0.5).value, self.point)
        mask = np.array([[1, 0, 0], [0, 1, 0], [1, 1, 1]], dtype=bool)
        self.assertTrue(np.all(matrix[~mask] == 0))
        self.assertEqual(np.count_nonzero(matrix), 5)

    def test_free_space_transverse_potential(self):
        single = solve_em_spectral(em_stack([], (2, 1.5)), self.omega, 0.7, 0.0)
        potential = recover_transverse_potential(single, 0.6)
        b1f, _, _ = em_free_space_b(self.omega, Material.em(2, 1.5), 0.7, 0.6, 0.0)
        self.assertAlmostEqual(potential.value[1], b1f)
        self.assertAlmostEqual(potential.value[2], b1f)
        self.assertAlmostEqual(abs(potential.value[5]), 0.0)

    def test_degenerate_point(self):
        sol = solve_em_spectral(self.stack, self.omega, 0.0, 0.3)
        with self.assertRaises(DegenerateSpectralPoint):
            recover_sommerfeld_potential(sol, -0.5)

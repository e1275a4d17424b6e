import numpy as np
from django.test import SimpleTestCase
from scipy.optimize import brentq

from basis_algebra.models import SpectralPoint
from core.exceptions import BranchPoint, CoincidentDepths, PhaseMismatch, SingularSystem
from oracle.closed_form import spectral_free_elastic, spectral_free_fluid
from oracle.halfspace import oracle_halfspace_reflection
from stack.factories import random_elastic_stack, source_depth
from stack.models import DOWN, UP, LayerStack, Material, Phase, ProblemKind
from .assembly import assemble_G_elastic, fluid_pressure
from .free_space import elastic_free_space_coeffs, fluid_free_space_coeff
from .models import FLUID_TENSOR, SOLID_TENSOR, ElasticLayerCoefficients, SourceKind, layout_for
from .residuals import acoustic_identity_residuals, elastic_interface_residuals
from .solver import interface_columns, interface_matrix, interface_rows, solve_elastic_spectral
from .traction import GROUPS, UNKNOWN_GROUP, evaluate_traction_scalars, traction_columns

SOLID = Material.elastic(1.0, 2.0, 1.0)
FLUID = Material.elastic(2.0, 1.0)


def elastic_stack(interfaces, *materials):
    return LayerStack(interfaces, materials, ProblemKind.ELASTIC)


def single_direction(phase, layout, direction, values):
    values = np.asarray(values, dtype=complex)
    empty = np.zeros(len(layout), dtype=complex)
    up, down = (values, empty) if direction == UP else (empty, values)
    return ElasticLayerCoefficients(phase=phase, layout=layout, up=up, down=down)


class FreeSpaceTests(SimpleTestCase):

    def test_normal_incidence_values(self):
        free = elastic_free_space_coeffs(1.0, SOLID, 0.0, UP)
        self.assertAlmostEqual(free.d_s, -0.5)
        self.assertAlmostEqual(free.x[0], -0.5)
        self.assertAlmostEqual(free.x[4], -0.5)

    def test_direction_flips_x1_x2_x5(self):
        up = elastic_free_space_coeffs(1.0, SOLID, 0.3, UP).x
        down = elastic_free_space_coeffs(1.0, SOLID, 0.3, DOWN).x
        np.testing.assert_allclose(down[[0, 1, 4]], -up[[0, 1, 4]], rtol=1e-15)
        np.testing.assert_allclose(down[[2, 3]], up[[2, 3]], rtol=1e-15)

    def test_branch_point(self):
        with self.assertRaises(BranchPoint):
            elastic_free_space_coeffs(1.0, SOLID, 1.0, UP)

    def test_fluid_source_coefficient(self):
        self.assertAlmostEqual(fluid_free_space_coeff(1.0, Material.elastic(1.0, 1.0), 0.0), 0.5j)

    def test_phase_checks(self):
        with self.assertRaises(PhaseMismatch):
            elastic_free_space_coeffs(1.0, FLUID, 0.1, UP)
        with self.assertRaises(PhaseMismatch):
            fluid_free_space_coeff(1.0, SOLID, 0.1)


class TractionTests(SimpleTestCase):

    def test_zero_coefficients(self):
        coeffs = single_direction(Phase.SOLID, SOLID_TENSOR, UP, np.zeros(5))
        scalars = evaluate_traction_scalars(coeffs, SOLID, 1.0, 0.6, 0.0)
        self.assertFalse(np.any(scalars.as_array()))

    def test_single_x3_term(self):
        coeffs = single_direction(Phase.SOLID, SOLID_TENSOR, UP, [0, 0, 1, 0, 0])
        T = evaluate_traction_scalars(coeffs, SOLID, 1.0, 0.6, 0.0)
        # k_s = 1, k_sz = 0.8, k_rho^2 = 0.36
        self.assertAlmostEqual(T[1], -2j * 0.8 * 0.36)
        self.assertAlmostEqual(T[3], -0.36)
        self.assertAlmostEqual(T[6], 0.28)
        self.assertAlmostEqual(T[9], -0.8j)
        for k in GROUPS['A']:
            self.assertEqual(T[k], 0)

    def test_fluid_pressure_row(self):
        coeffs = single_direction(Phase.FLUID, FLUID_TENSOR, UP, [1, 0])
        T = evaluate_traction_scalars(coeffs, FLUID, 1.0, 0.3, 0.0)
        self.assertAlmostEqual(T[1], -2.0)
        self.assertEqual(T[2], 0)

    def test_columns_stay_in_their_group(self):
        for material in (SOLID, FLUID):
            columns = traction_columns(material, 1.3, 0.7, 0.4 + 0.1j, 0.9, DOWN, 0.8, 0.6 - 0.2j)
            for name, column in columns.items():
                other = GROUPS['B' if UNKNOWN_GROUP[name] == 'A' else 'A']
                self.assertFalse(np.any(column[[k - 1 for k in other]]), name)


class SolveTests(SimpleTestCase):

    def test_single_solid_layer_has_no_reaction(self):
        sol = solve_elastic_spectral(elastic_stack([], SOLID), 1.0, 0.4, 0.0)
        self.assertFalse(np.any(sol.layers[0].up))
        self.assertFalse(np.any(sol.layers[0].down))

    def test_identical_layers_do_not_reflect(self):
        sol = solve_elastic_spectral(elastic_stack([0.0], SOLID, SOLID), 1.0, 0.4, 0.5)
        self.assertLessEqual(np.abs(sol.layers[0].up).max(), 1e-14)
        single = solve_elastic_spectral(elastic_stack([], SOLID), 1.0, 0.4, 0.5)
        point = SpectralPoint.from_polar(0.4, 0.7)
        np.testing.assert_allclose(
            assemble_G_elastic(sol, point, -0.8).matrix, assemble_G_elastic(single, point, -0.8).matrix,
            rtol=1e-12, atol=1e-15,
        )

    def test_radiation_zeros_are_exact(self):
        rng = np.random.default_rng(5)
        stack = random_elastic_stack(rng, ['solid', 'fluid', 'solid', 'solid'])
        sol = solve_elastic_spectral(stack, 1.0, 0.8, source_depth(rng, stack, 2), loss=1e-3)
        self.assertTrue(np.all(sol.layers[0].down == 0))
        self.assertTrue(np.all(sol.layers[-1].up == 0))

    def test_source_phase_must_match(self):
        stack = elastic_stack([0.0], SOLID, FLUID)
        with self.assertRaises(PhaseMismatch):
            solve_elastic_spectral(stack, 1.0, 0.3, -0.5)
        with self.assertRaises(PhaseMismatch):
            solve_elastic_spectral(stack, 1.0, 0.3, 0.5, source_kind=SourceKind.VECTOR)
        with self.assertRaises(PhaseMismatch):
            solve_elastic_spectral(elastic_stack([0.0], Material.vacuum(), SOLID), 1.0, 0.3, 0.5)

    def test_degenerate_k_rho_snaps_to_zero(self):
        sol = solve_elastic_spectral(elastic_stack([0.0], SOLID, FLUID), 1.0, 1e-12, 0.5)
        self.assertEqual(sol.k_rho, 0.0)

    def test_fluid_halfspace_matches_acoustic_reflection(self):
        upper, lower = Material.elastic(1.0, 1.0), Material.elastic(2.5, 4.0)
        stack = elastic_stack([0.0], upper, lower)
        z_source = 0.5
        for k_rho in (0.0, 0.2, 0.6, 0.95, 1.5):
            sol = solve_elastic_spectral(stack, 1.0, k_rho, z_source, source_kind=SourceKind.VECTOR)
            k0 = np.sqrt(complex(1 - k_rho ** 2))
            k1 = np.sqrt(complex(2.5 / 4.0 - k_rho ** 2))
            k0, k1 = (k if k.real > 0 or k.imag >= 0 else -k for k in (k0, k1))
            expected = (2.5 * k0 - 1.0 * k1) / (2.5 * k0 + 1.0 * k1)
            reflection = oracle_halfspace_reflection('acoustic', stack.materials, 1.0, k_rho)
            self.assertAlmostEqual(reflection, expected, places=12)
            incident = fluid_free_space_coeff(1.0, upper, k_rho) * np.exp(1j * k0 * z_source)
            np.testing.assert_allclose(sol.layers[0]['g', UP], reflection * incident, rtol=1e-12)

    def test_rayleigh_pole_is_reported(self):
        material = Material.elastic(1.0, 1.0, 1.0)
        k_s, k_c = 1.0, 1 / np.sqrt(3.0)

        def rayleigh(k):
            k_sq = k * k
            return (2 * k_sq - k_s ** 2) ** 2 - 4 * k_sq * np.sqrt(k_sq - k_s ** 2) * np.sqrt(k_sq - k_c ** 2)

        root = brentq(rayleigh, 1 + 1e-9, 2.0, xtol=1e-15)
        stack = elastic_stack([0.0], Material.vacuum(), material)
        with self.assertRaises(SingularSystem) as caught:
            solve_elastic_spectral(stack, 1.0, root, -0.5, condition_limit=1e8)
        self.assertAlmostEqual(caught.exception.k_rho, root)

    def test_groups_do_not_couple(self):
        rng = np.random.default_rng(3)
        stack = random_elastic_stack(rng, ['vacuum', 'solid', 'fluid', 'solid'])
        phases = [m.phase for m in stack.materials]
        layouts = [layout_for(phase, SourceKind.TENSOR) for phase in phases]
        for rows, columns in (('A', 'B'), ('B', 'A')):
            matrix = interface_matrix(
                stack, 1.0, 0.7, layouts, interface_rows(phases, rows), interface_columns(layouts, columns),
            )
            self.assertFalse(np.any(matrix))

    def test_splitting_a_layer_changes_nothing_outside(self):
        rng = np.random.default_rng(8)
        upper, middle, lower = (random_elastic_stack(rng, ['solid']).materials[0] for _ in range(3))
        whole = elastic_stack([0.0, -1.2], upper, middle, lower)
        split = elastic_stack([0.0, -0.5, -1.2], upper, middle, middle, lower)
        first = solve_elastic_spectral(whole, 1.0, 0.6, 0.4, loss=1e-3)
        second = solve_elastic_spectral(split, 1.0, 0.6, 0.4, loss=1e-3)
        np.testing.assert_allclose(second.layers[0].up, first.layers[0].up, rtol=1e-10, atol=1e-14)
        np.testing.assert_allclose(second.layers[-1].down, first.layers[-1].down, rtol=1e-10, atol=1e-14)


class AssemblyTests(SimpleTestCase):

    def test_single_solid_matches_closed_form(self):
        point = SpectralPoint(0.3, -0.5)
        sol = solve_elastic_spectral(elastic_stack([], SOLID), 1.0, point.k_rho, 0.2)
        for z in (0.9, -0.6):
            np.testing.assert_allclose(
                assemble_G_elastic(sol, point, z).matrix, spectral_free_elastic(1.0, SOLID, point, z, 0.2),
                rtol=1e-12, atol=1e-14,
            )

    def test_normal_incidence_matches_closed_form(self):
        point = SpectralPoint(0.0, 0.0)
        sol = solve_elastic_spectral(elastic_stack([], SOLID), 1.0, 0.0, 0.2)
        assembled = assemble_G_elastic(sol, point, -0.3)
        self.assertIsNone(assembled.coefficients)
        np.testing.assert_allclose(
            assembled.matrix, spectral_free_elastic(1.0, SOLID, point, -0.3, 0.2), rtol=1e-12, atol=1e-15,
        )

    def test_single_fluid_matches_closed_form(self):
        point = SpectralPoint(-0.4, 0.2)
        sol = solve_elastic_spectral(
            elastic_stack([], FLUID), 1.0, point.k_rho, 0.0, source_kind=SourceKind.VECTOR,
        )
        for z in (0.7, -1.1):
            assembled = assemble_G_elastic(sol, point, z)
            np.testing.assert_allclose(
                assembled.vector, spectral_free_fluid(1.0, FLUID, point, z, 0.0), rtol=1e-12, atol=1e-14,
            )
            self.assertEqual(assembled.coefficients.c7, 0)

    def test_fluid_pressure_in_free_space(self):
        point = SpectralPoint(0.3, 0.1)
        sol = solve_elastic_spectral(
            elastic_stack([], FLUID), 1.0, point.k_rho, 0.0, source_kind=SourceKind.VECTOR,
        )
        k_cz = np.sqrt(2.0 - point.k_rho_sq)
        expected = -1j * np.exp(1j * k_cz * 0.8) / (2 * k_cz)
        self.assertAlmostEqual(fluid_pressure(sol, point, 0.8), expected, places=13)

    def test_pressure_needs_fluid(self):
        sol = solve_elastic_spectral(elastic_stack([0.0], SOLID, FLUID), 1.0, 0.3, 0.5)
        point = SpectralPoint(0.3, 0.0)
        with self.assertRaises(PhaseMismatch):
            fluid_pressure(sol, point, 0.2)
        self.assertEqual(fluid_pressure(sol, point, -0.4).shape, (3,))

    def test_fluid_columns_are_curl_free(self):
        point = SpectralPoint.from_polar(0.37, 0.9)
        sol = solve_elastic_spectral(elastic_stack([0.0], SOLID, FLUID), 1.0, 0.37, 0.4)
        matrix = assemble_G_elastic(sol, point, -0.6).matrix
        k_cz = sol.k_cz[1]
        n = np.array([1j * point.kx, 1j * point.ky, -1j * k_cz])
        for column in matrix.T:
            cross = np.cross(n, column)
            self.assertLessEqual(np.abs(cross).max(), 1e-12 * np.linalg.norm(n) * np.linalg.norm(column))

    def test_coincident_target(self):
        sol = solve_elastic_spectral(elastic_stack([], SOLID), 1.0, 0.3, 0.2)
        with self.assertRaises(CoincidentDepths):
            assemble_G_elastic(sol, SpectralPoint(0.3, 0.0), 0.2)


class ResidualTests(SimpleTestCase):
    TENSOR_STACKS = (
        ['solid', 'solid', 'solid'],
        ['solid', 'fluid', 'solid'],
        ['vacuum', 'solid', 'fluid'],
        ['fluid', 'solid', 'solid', 'vacuum'],
        ['solid', 'fluid', 'fluid'],
    )
    VECTOR_STACKS = (
        ['fluid', 'fluid', 'solid'],
        ['vacuum', 'fluid', 'solid', 'fluid'],
        ['fluid', 'fluid', 'fluid'],
    )

    def _check(self, phases, source_kind, rng):
        stack = random_elastic_stack(rng, phases)
        wanted = Phase.SOLID if source_kind == SourceKind.TENSOR else Phase.FLUID
        j = next(t for t, m in enumerate(stack.materials) if m.phase == wanted)
        z_source = source_depth(rng, stack, j)
        for k_rho in (0.1, 1.0, 3.0):
            sol = solve_elastic_spectral(stack, 1.0, k_rho, z_source, source_kind=source_kind, loss=1e-3)
            report = elastic_interface_residuals(sol)
            self.assertLessEqual(report.worst, 1e-10, (phases, k_rho, report.by_check()))
            self.assertEqual(report.radiation, 0.0)

    def test_tensor_sources(self):
        rng = np.random.default_rng(11)
        for phases in self.TENSOR_STACKS:
            self._check(phases, SourceKind.TENSOR, rng)

    def test_vector_sources(self):
        rng = np.random.default_rng(12)
        for phases in self.VECTOR_STACKS:
            self._check(phases, SourceKind.VECTOR, rng)

    def test_shear_free_contact_with_fluid(self):
        # 流体一侧没有 T6/T7 贡献, 固体一侧各项相互抵消到舍入量级
        lower = Material.elastic(1.5, 3.0, 1.2)
        stack = elastic_stack([0.0, -1.0], SOLID, FLUID, lower)
        for k_rho in (0.3, 1.0, 2.0, 3.0):
            sol = solve_elastic_spectral(stack, 1.0, k_rho, 0.4, loss=1e-3)
            checks = elastic_interface_residuals(sol).by_check()
            self.assertLessEqual(checks['T6'], 1e-10, k_rho)
            self.assertLessEqual(checks['T7'], 1e-10, k_rho)
            self.assertLessEqual(max(checks.values()), 1e-10, (k_rho, checks))

    def test_solid_fluid_solid_residuals(self):
        rng = np.random.default_rng(11)
        stack = random_elastic_stack(rng, ['solid', 'fluid', 'solid'])
        sol = solve_elastic_spectral(stack, 1.0, 1.0, source_depth(rng, stack, 0), loss=1e-3)
        self.assertLessEqual(elastic_interface_residuals(sol).worst, 1e-10)

    def test_free_surface_reports_zero_traction_only(self):
        rng = np.random.default_rng(4)
        stack = random_elastic_stack(rng, ['vacuum', 'solid'])
        sol = solve_elastic_spectral(stack, 1.0, 0.4, -0.5)
        self.assertEqual(sorted(elastic_interface_residuals(sol).by_check()), ['T1', 'T2', 'T5', 'T6', 'T7'])

    def test_perturbed_coefficients_fail(self):
        rng = np.random.default_rng(9)
        stack = random_elastic_stack(rng, ['solid', 'solid', 'fluid'])
        sol = solve_elastic_spectral(stack, 1.0, 0.5, source_depth(rng, stack, 0), loss=1e-3)
        self.assertGreaterEqual(elastic_interface_residuals(sol.perturbed(1e-3)).worst, 1e-5)

    def test_acoustic_identities(self):
        rng = np.random.default_rng(13)
        stack = random_elastic_stack(rng, ['fluid', 'fluid', 'fluid'])
        sol = solve_elastic_spectral(stack, 1.0, 0.4, source_depth(rng, stack, 1),
                                     source_kind=SourceKind.VECTOR, loss=1e-3)
        report = acoustic_identity_residuals(sol)
        self.assertEqual(len(report.interfaces), 2)
        self.assertLessEqual(report.worst, 1e-10)

import numpy as np
from django.test import SimpleTestCase

from basis_algebra.basis import decompose
from basis_algebra.models import SpectralPoint
from stack.factories import random_elastic_stack, random_em_stack, source_depth
from stack.models import LayerStack, Material, Phase, ProblemKind
from .closed_form import (
    spatial_free_elastic, spatial_free_GE, spectral_free_elastic, spectral_free_GE,
)
from .crosscheck import elastic_cross_check, em_cross_check
from .elastic import oracle_elastic_field, oracle_elastic_full
from .em import oracle_em_field, oracle_em_full
from .halfspace import oracle_halfspace_reflection


def random_phases(rng, source_phase):
    """随机相态序列, 真空只在两端, 且至少有一层 source_phase"""
    while True:
        count = int(rng.integers(2, 6))
        phases = list(rng.choice(['solid', 'fluid'], size=count))
        if rng.random() < 0.25:
            phases[0] = 'vacuum'
        if rng.random() < 0.25:
            phases[-1] = 'vacuum'
        if source_phase in phases and phases.count('vacuum') < count:
            return phases


def targets(rng, stack):
    return [
        source_depth(rng, stack, t) for t, m in enumerate(stack.materials) if m.phase != Phase.VACUUM
    ]


class HalfspaceTests(SimpleTestCase):

    def test_identical_materials_do_not_reflect(self):
        materials = (Material.em(2, 1), Material.em(2, 1))
        self.assertEqual(oracle_halfspace_reflection('TE', materials, 1.0, 0.5), 0)

    def test_rigid_limit(self):
        materials = (Material.elastic(1.0, 1.0), Material.elastic(1e8, 1e8))
        self.assertGreater(abs(oracle_halfspace_reflection('acoustic', materials, 1.0, 0.3)), 0.99999)

    def test_tm_normal_incidence_fixture(self):
        materials = (Material.em(1, 1), Material.em(4, 1))
        self.assertAlmostEqual(oracle_halfspace_reflection('TM', materials, 1.0, 0.0), 1 / 3, places=14)

    def test_needs_two_layers(self):
        with self.assertRaises(ValueError):
            oracle_halfspace_reflection('TE', (Material.em(1, 1),), 1.0, 0.0)


class ClosedFormTests(SimpleTestCase):

    def test_em_dyadic_is_symmetric(self):
        material = Material.em(1.5, 1.0)
        tensor = spatial_free_GE(1.0, material, (0, 0, 0), (0.3, -0.7, 1.1))
        np.testing.assert_allclose(tensor, tensor.T, rtol=1e-14)

    def test_normal_incidence_separates_waves(self):
        material = Material.elastic(1.0, 2.0, 1.0)
        spectral = spectral_free_elastic(1.0, material, SpectralPoint(0.0, 0.0), 0.5, 0.0)
        # 法向入射: 横向分量只含横波, 竖向只含纵波
        self.assertAlmostEqual(spectral[0, 2], 0)
        self.assertAlmostEqual(spectral[0, 0], 1j * np.exp(0.5j) / 2)
        self.assertAlmostEqual(spatial_free_elastic(1.0, material, (0, 0, 0), (0, 0, 2.0))[0, 1], 0)

    def test_spectral_ge_trace(self):
        material = Material.em(1.0, 1.0)
        point = SpectralPoint(0.2, 0.1)
        tensor = spectral_free_GE(1.0, material, point, 0.4, 0.0)
        kz = np.sqrt(1 - point.k_rho_sq)
        g = 1j * np.exp(1j * kz * 0.4) / (2 * kz)
        # tr(I + n n^T / k^2) = 3 - 1 = 2
        self.assertAlmostEqual(np.trace(tensor), 2 * g, places=14)


class EmOracleTests(SimpleTestCase):

    def test_random_stacks_agree_with_basis_solver(self):
        rng = np.random.default_rng(101)
        checked = 0
        for trial in range(50):
            stack = random_em_stack(rng, int(rng.integers(1, 6)))
            j = int(rng.integers(0, stack.layer_count))
            z_source = source_depth(rng, stack, j)
            k_rho = float(rng.choice([0.3, 1.2, 2.5]))
            point = SpectralPoint.from_polar(k_rho, rng.uniform(0, 2 * np.pi))
            result = em_cross_check(stack, 1.0, point, z_source, targets(rng, stack), loss=1e-3)
            if result.skipped:
                continue
            checked += 1
            self.assertLessEqual(result.error, 1e-9, (trial, result))
            self.assertLessEqual(result.filtering, 1e-10, (trial, result))
        self.assertGreater(checked, 40)

    def test_coefficients_do_not_depend_on_azimuth(self):
        rng = np.random.default_rng(7)
        stack = random_em_stack(rng, 3)
        z_source = source_depth(rng, stack, 1)
        z = source_depth(rng, stack, 2)
        values = []
        for alpha in (0.4, 2.1):
            point = SpectralPoint.from_polar(0.8, alpha)
            field = oracle_em_field(oracle_em_full(stack, 1.0, point, z_source, loss=1e-3), z)
            values.append(decompose(field, point).values[:5])
        np.testing.assert_allclose(values[0], values[1], rtol=1e-10, atol=1e-10 * np.abs(values[0]).max())

    def test_single_layer_is_free_space(self):
        stack = LayerStack([], (Material.em(2.0, 1.0),), ProblemKind.MAXWELL)
        point = SpectralPoint(0.4, 0.2)
        sol = oracle_em_full(stack, 1.0, point, 0.0)
        self.assertEqual(sol.unknowns.shape, (1, 2, 3, 3))
        self.assertFalse(np.any(sol.unknowns))
        np.testing.assert_allclose(
            oracle_em_field(sol, 0.6), spectral_free_GE(1.0, stack.materials[0], point, 0.6, 0.0), rtol=1e-15,
        )


class ElasticOracleTests(SimpleTestCase):

    def _run(self, rng, source_kind, trials):
        source_phase = 'solid' if source_kind == 'tensor' else 'fluid'
        checked = 0
        for trial in range(trials):
            phases = random_phases(rng, source_phase)
            stack = random_elastic_stack(rng, phases)
            j = phases.index(source_phase)
            z_source = source_depth(rng, stack, j)
            k_rho = float(rng.choice([0.3, 1.2, 2.5]))
            point = SpectralPoint.from_polar(k_rho, rng.uniform(0, 2 * np.pi))
            result = elastic_cross_check(
                stack, 1.0, point, z_source, targets(rng, stack), source_kind, loss=1e-3,
            )
            if result.skipped:
                continue
            checked += 1
            self.assertLessEqual(result.error, 1e-9, (trial, phases, result))
            self.assertLessEqual(result.filtering, 1e-10, (trial, phases, result))
        return checked

    def test_tensor_sources_agree_with_basis_solver(self):
        self.assertGreater(self._run(np.random.default_rng(202), 'tensor', 50), 35)

    def test_vector_sources_agree_with_basis_solver(self):
        self.assertGreater(self._run(np.random.default_rng(303), 'vector', 30), 20)

    def test_fluid_middle_layer(self):
        rng = np.random.default_rng(17)
        stack = random_elastic_stack(rng, ['solid', 'fluid', 'solid'])
        result = elastic_cross_check(
            stack, 1.0, SpectralPoint.from_polar(0.6, 1.0), source_depth(rng, stack, 0),
            [source_depth(rng, stack, 1)], loss=1e-3,
        )
        self.assertFalse(result.skipped)
        self.assertLessEqual(result.error, 1e-10)

    def test_single_solid_is_free_space(self):
        material = Material.elastic(1.0, 2.0, 1.0)
        stack = LayerStack([], (material,), ProblemKind.ELASTIC)
        point = SpectralPoint(0.3, -0.1)
        sol = oracle_elastic_full(stack, 1.0, point, 0.0)
        np.testing.assert_allclose(
            oracle_elastic_field(sol, -0.4), spectral_free_elastic(1.0, material, point, -0.4, 0.0), rtol=1e-15,
        )

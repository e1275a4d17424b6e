# hankel/tests.py
import numpy as np
from django.test import SimpleTestCase, tag
from scipy.special import jv, roots_legendre

from basis_algebra.basis import basis_stack
from core.exceptions import ConfigError, NonConvergent
from oracle.closed_form import helmholtz_green, spatial_free_elastic, spatial_free_fluid, spatial_free_GE, spatial_free_GH
from stack.models import LayerStack, Material, ProblemKind
from stack.wavenumbers import vertical_wavenumber
from .channels import angular_coefficients, combine, vector_coefficients
from .models import GreenKind, QuadratureSpec, RadialIntegrand
from .quadrature import inverse_radial_transform
from .spatial import spatial_green, spatial_green_batch

FAST = QuadratureSpec(panels=40, rtol=1e-8, loss=1e-5)


def relative(a, b):
    return np.abs(a - b).max() / np.abs(b).max()


class QuadratureSpecTests(SimpleTestCase):

    def test_rtol_range(self):
        with self.assertRaises(ConfigError):
            QuadratureSpec(rtol=0.0)
        with self.assertRaises(ConfigError):
            QuadratureSpec(rtol=0.1)

    def test_truncation_below_twice_k(self):
        with self.assertRaises(ConfigError):
            QuadratureSpec(truncation=3.0).resolve_truncation(2.0)

    def test_default_truncation(self):
        self.assertEqual(QuadratureSpec().resolve_truncation(2.0), 24.0)

    def test_bessel_order(self):
        for order in (3, -1, 1.0, True):
            with self.assertRaises(ValueError):
                RadialIntegrand(lambda k: k, order, 1.0)

    def test_radius(self):
        for rho in (-0.5, float('nan'), float('inf')):
            with self.assertRaises(ValueError):
                RadialIntegrand(lambda k: k, 0, rho)


class RadialTransformTests(SimpleTestCase):

    def test_weyl_identity(self):
        k = 1.0 * (1 + 1e-4j)

        def reflected(k_rho):
            kz = vertical_wavenumber(k, k_rho)
            return 1j * np.exp(1j * kz * 1.0) / (2 * kz)

        integrand = RadialIntegrand(reflected, 0, 1.0, k_scale=1.0, breakpoints=(1.0,))
        value = inverse_radial_transform(integrand, FAST)
        expected = helmholtz_green(k, np.sqrt(2.0))
        self.assertLess(abs(value - expected) / abs(expected), 1e-5)

    def test_zero_integrand(self):
        value = inverse_radial_transform(RadialIntegrand(lambda k: 0.0, 0, 1.0), FAST)
        self.assertEqual(value, 0)

    def test_axis_vanishes_for_higher_orders(self):
        self.assertEqual(inverse_radial_transform(RadialIntegrand(np.exp, 1, 0.0), FAST), 0)

    def test_gaussian(self):
        # (1/2pi) int e^{-k^2} J0(k rho) k dk = e^{-rho^2/4} / (4 pi)
        integrand = RadialIntegrand(lambda k: np.exp(-k * k), 0, 1.5, k_scale=1.0)
        value = inverse_radial_transform(integrand, FAST)
        self.assertAlmostEqual(value.real, np.exp(-1.5 ** 2 / 4) / (4 * np.pi), places=10)

    def test_rejects_bad_integrand(self):
        class Loose:
            function = staticmethod(np.exp)
            order, rho, k_scale, breakpoints = 1.5, 1.0, 1.0, ()

        with self.assertRaises(ValueError):
            inverse_radial_transform(Loose(), FAST)
        Loose.order, Loose.rho = 1, -1.0
        with self.assertRaises(ValueError):
            inverse_radial_transform(Loose(), FAST)

    def test_undamped_tail(self):
        spec = QuadratureSpec(panels=8, rtol=1e-8, max_tail_segments=4)
        with self.assertRaises(NonConvergent):
            inverse_radial_transform(RadialIntegrand(lambda k: 1.0, 0, 1.0), spec)


class ChannelTests(SimpleTestCase):

    def test_coefficients_reproduce_unit_basis(self):
        alpha = np.linspace(0, 2 * np.pi, 13)
        functions = np.stack([np.ones_like(alpha), np.cos(alpha), np.sin(alpha), np.cos(2 * alpha), np.sin(2 * alpha)])
        rebuilt = np.einsum('ma,mlij->alij', functions, angular_coefficients())
        np.testing.assert_allclose(rebuilt, basis_stack(np.cos(alpha), np.sin(alpha)), atol=1e-14)

    def test_matches_two_dimensional_quadrature(self):
        rng = np.random.default_rng(3)
        weights = rng.normal(size=9) + 1j * rng.normal(size=9)
        rho, phi = 1.3, 0.7

        nodes, w = roots_legendre(120)
        k = 4.0 * (nodes + 1)
        w = 4.0 * w
        radial_profile = np.exp(-k * k) * k * w / (2 * np.pi)
        radial = np.array([[c * np.sum(radial_profile * jv(n, k * rho)) for n in range(3)] for c in weights])

        alpha = 2 * np.pi * np.arange(96) / 96
        unit = np.einsum('l,alij->aij', weights, basis_stack(np.cos(alpha), np.sin(alpha)))
        phase = np.exp(1j * np.multiply.outer(k * rho, np.cos(alpha - phi)))
        brute = np.einsum('k,ka,aij->ij', radial_profile, phase, unit) / len(alpha)

        np.testing.assert_allclose(combine(radial, phi), brute, atol=1e-12)

    def test_vector_coefficients_are_third_columns(self):
        coefficients = vector_coefficients()
        self.assertEqual(coefficients.shape, (5, 3, 3))
        np.testing.assert_array_equal(coefficients, angular_coefficients()[:, [1, 2, 6], :, 2].transpose(1, 0, 2))

    def test_vector_matches_two_dimensional_quadrature(self):
        weights = np.array([0.4 - 1j, 1.2 + 0.3j, -0.7j])
        rho, phi = 0.9, -1.1

        nodes, w = roots_legendre(120)
        k = 4.0 * (nodes + 1)
        w = 4.0 * w
        radial_profile = np.exp(-k * k) * k * w / (2 * np.pi)
        radial = np.array([[c * np.sum(radial_profile * jv(n, k * rho)) for n in range(3)] for c in weights])

        alpha = 2 * np.pi * np.arange(96) / 96
        columns = basis_stack(np.cos(alpha), np.sin(alpha))[:, [1, 2, 6]][..., 2]
        unit = np.einsum('l,ali->ai', weights, columns)
        phase = np.exp(1j * np.multiply.outer(k * rho, np.cos(alpha - phi)))
        brute = np.einsum('k,ka,ai->i', radial_profile, phase, unit) / len(alpha)

        result = combine(radial, phi, vector=True)
        self.assertEqual(result.shape, (3,))
        np.testing.assert_allclose(result, brute, atol=1e-12)


class FreeSpaceTests(SimpleTestCase):

    def test_em(self):
        material = Material.em(1.0, 1.0)
        stack = LayerStack((), (material,), ProblemKind.MAXWELL)
        source, target = (0.0, 0.0, 0.0), (0.8, 0.6, 1.0)
        lossy = material.with_loss(FAST.loss)
        ge = spatial_green(stack, 3.0, source, target, GreenKind.GE, FAST)
        gh = spatial_green(stack, 3.0, source, target, GreenKind.GH, FAST)
        self.assertLess(relative(ge, spatial_free_GE(3.0, lossy, source, target)), 1e-5)
        self.assertLess(relative(gh, spatial_free_GH(3.0, lossy, source, target)), 1e-5)

    def test_elastic(self):
        material = Material.elastic(1.0, 2.0, 1.0)
        stack = LayerStack((), (material,), ProblemKind.ELASTIC)
        source, target = (0.0, 0.0, 0.0), (1.2, 0.9, 1.0)
        value = spatial_green(stack, 2.0, source, target, GreenKind.ELASTIC, FAST)
        expected = spatial_free_elastic(2.0, material.with_loss(FAST.loss), source, target)
        self.assertLess(relative(value, expected), 1e-5)

    def test_fluid_vector(self):
        material = Material.elastic(1.0, 1.0)
        stack = LayerStack((), (material,), ProblemKind.ELASTIC)
        source, target = (0.0, 0.0, 0.5), (-1.0, 1.5, -0.5)
        value = spatial_green(stack, 2.0, source, target, GreenKind.ELASTIC, FAST, source_kind='vector')
        expected = spatial_free_fluid(2.0, material.with_loss(FAST.loss), source, target)
        self.assertEqual(value.shape, (3,))
        self.assertLess(relative(value, expected), 1e-5)

    def test_wrong_stack(self):
        stack = LayerStack((), (Material.em(1, 1),), ProblemKind.MAXWELL)
        with self.assertRaises(ValueError):
            spatial_green(stack, 1.0, (0, 0, 0), (1, 0, 1), GreenKind.ELASTIC, FAST)


class LayeredTests(SimpleTestCase):

    def setUp(self):
        self.stack = LayerStack(
            (0.0,), (Material.em(1.0, 1.0), Material.em(4.0, 1.0)), ProblemKind.MAXWELL,
        )
        self.source = (0.0, 0.0, 0.5)

    def test_rotation_covariance(self):
        angles = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        targets = np.array([[np.cos(a), np.sin(a), 1.5] for a in angles])
        values = spatial_green_batch(self.stack, 1.0, self.source, targets, GreenKind.GE, FAST)
        for angle, value in zip(angles, values):
            c, s = np.cos(angle), np.sin(angle)
            rotation = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
            self.assertLess(relative(value, rotation @ values[0] @ rotation.T), 1e-10)

    def test_batch_matches_single(self):
        targets = np.array([[0.5, 0.2, 1.5], [0.3, -0.4, -0.8]])
        batch = spatial_green_batch(self.stack, 1.0, self.source, targets, GreenKind.GH, FAST)
        single = spatial_green(self.stack, 1.0, self.source, targets[1], GreenKind.GH, FAST)
        self.assertLess(relative(batch[1], single), 1e-6)

    def test_tolerance_refinement(self):
        target = (0.6, 0.1, -0.7)
        coarse = spatial_green(self.stack, 1.0, self.source, target, GreenKind.GE, QuadratureSpec(panels=40, rtol=1e-6))
        fine = spatial_green(self.stack, 1.0, self.source, target, GreenKind.GE, QuadratureSpec(panels=40, rtol=5e-7))
        self.assertLess(relative(coarse, fine), 1e-5)


def acceptance_targets(wavelength, source):
    # 20 个目标: r 取 0.5 到 5 个波长, 四组深度差, 方位角各不相同
    distances = np.geomspace(0.5, 5.0, 5) * wavelength
    targets = []
    for i, dz in enumerate((0.3, -0.3, 0.45, -0.45)):
        for j, r in enumerate(distances):
            rho = np.sqrt(r ** 2 - (dz * wavelength) ** 2)
            phi = 0.37 + 1.3 * i + 0.71 * j
            targets.append((source[0] + rho * np.cos(phi), source[1] + rho * np.sin(phi), source[2] + dz * wavelength))
    return np.array(targets)


@tag('slow')
class FreeSpaceAcceptanceTests(SimpleTestCase):
    """默认设置下 20 个目标与闭式解比较。"""

    def setUp(self):
        self.spec = QuadratureSpec.from_settings()
        self.source = (0.0, 0.0, 0.2)

    def test_em_targets(self):
        material = Material.em(1.0, 1.0)
        stack = LayerStack((), (material,), ProblemKind.MAXWELL)
        targets = acceptance_targets(2 * np.pi, self.source)
        values = spatial_green_batch(stack, 1.0, self.source, targets, GreenKind.GE, self.spec)
        lossy = material.with_loss(self.spec.loss)
        for target, value in zip(targets, values):
            expected = spatial_free_GE(1.0, lossy, self.source, target)
            self.assertLess(relative(value, expected), 1e-5, target)

    def test_elastic_targets(self):
        material = Material.elastic(1.0, 2.0, 1.0)
        stack = LayerStack((), (material,), ProblemKind.ELASTIC)
        # k_s = omega sqrt(rho / mu) = 1
        targets = acceptance_targets(2 * np.pi, self.source)
        values = spatial_green_batch(stack, 1.0, self.source, targets, GreenKind.ELASTIC, self.spec)
        lossy = material.with_loss(self.spec.loss)
        for target, value in zip(targets, values):
            expected = spatial_free_elastic(1.0, lossy, self.source, target)
            self.assertLess(relative(value, expected), 1e-5, target)

# stack/tests.py
import numpy as np
from django.test import SimpleTestCase

from core.exceptions import InvalidStack, OnInterface, VacuumHasNoWavenumber
from .models import LayerStack, Material, Phase, ProblemKind
from .wavenumbers import (
    interface_tolerance, layer_wavenumbers, locate_layer, max_wavenumber, vertical_wavenumber, wavenumbers,
)


def em_stack(interfaces, *pairs):
    return LayerStack(interfaces, tuple(Material.em(e, m) for e, m in pairs), ProblemKind.MAXWELL)


class MaterialTests(SimpleTestCase):

    def test_phase_follows_shear_modulus(self):
        self.assertEqual(Material.elastic(1.0, 2.0, 1.0).phase, Phase.SOLID)
        self.assertEqual(Material.elastic(1.0, 2.0).phase, Phase.FLUID)
        self.assertEqual(Material.vacuum().phase, Phase.VACUUM)

    def test_rejects_nonpositive_lame(self):
        with self.assertRaises(InvalidStack):
            Material.elastic(1.0, -1.0, 1.0)
        with self.assertRaises(InvalidStack):
            Material.em(0.0, 1.0)

    def test_loss_scales_wavenumbers(self):
        delta = 1e-3
        em = Material.em(2.0, 1.5)
        self.assertAlmostEqual(wavenumbers(em.with_loss(delta), 1.3), wavenumbers(em, 1.3) * (1 + 1j * delta))
        solid = Material.elastic(1.0, 2.0, 1.0)
        lossy = wavenumbers(solid.with_loss(delta), 1.0)
        self.assertAlmostEqual(lossy.k_s, 1.0 + 1j * delta)
        self.assertAlmostEqual(lossy.k_c, 0.5 * (1 + 1j * delta))
        self.assertEqual(lossy.k_c.imag > 0, True)


class LayerStackTests(SimpleTestCase):

    def test_interfaces_must_decrease(self):
        with self.assertRaises(InvalidStack):
            em_stack([0.0, 1.0], (1, 1), (2, 1), (3, 1))

    def test_material_count(self):
        with self.assertRaises(InvalidStack):
            em_stack([0.0], (1, 1))

    def test_vacuum_only_at_ends(self):
        solid = Material.elastic(1.0, 2.0, 1.0)
        LayerStack([0.0], (Material.vacuum(), solid), ProblemKind.ELASTIC)
        with self.assertRaises(InvalidStack):
            LayerStack([0.0, -1.0], (solid, Material.vacuum(), solid), ProblemKind.ELASTIC)

    def test_maxwell_rejects_elastic(self):
        with self.assertRaises(InvalidStack):
            LayerStack([], (Material.elastic(1.0, 1.0, 1.0),), ProblemKind.MAXWELL)


class LocateLayerTests(SimpleTestCase):

    def test_single_interface(self):
        stack = em_stack([0.0], (1, 1), (4, 1))
        self.assertEqual(locate_layer(stack, 1.0), 0)
        self.assertEqual(locate_layer(stack, -1.0), 1)

    def test_between_interfaces(self):
        stack = em_stack([0.0, -2.0], (1, 1), (2, 1), (3, 1))
        self.assertEqual(locate_layer(stack, -1.0), 1)

    def test_on_interface(self):
        stack = em_stack([0.0], (1, 1), (4, 1))
        with self.assertRaises(OnInterface):
            locate_layer(stack, 0.0)

    def test_consistent_near_interfaces(self):
        stack = em_stack([0.5, -0.25, -3.0], (1, 1), (2, 1), (3, 1), (4, 1))
        delta = 10 * interface_tolerance(stack)
        for index, depth in enumerate(stack.interfaces):
            self.assertEqual(locate_layer(stack, depth + delta), index)
            self.assertEqual(locate_layer(stack, depth - delta), index + 1)


class WavenumberTests(SimpleTestCase):

    def test_em(self):
        self.assertAlmostEqual(wavenumbers(Material.em(1.0, 1.0), 2.0), 2.0)

    def test_solid(self):
        pair = wavenumbers(Material.elastic(1.0, 2.0, 1.0), 1.0)
        self.assertAlmostEqual(pair.k_s, 1.0)
        self.assertAlmostEqual(pair.k_c, 0.5)

    def test_fluid(self):
        pair = wavenumbers(Material.elastic(1.0, 1.0), 1.0)
        self.assertIsNone(pair.k_s)
        self.assertAlmostEqual(pair.k_c, 1.0)

    def test_vacuum(self):
        with self.assertRaises(VacuumHasNoWavenumber):
            wavenumbers(Material.vacuum(), 1.0)

    def test_vertical_branch(self):
        self.assertAlmostEqual(vertical_wavenumber(2.0, 1.0), np.sqrt(3.0))
        self.assertAlmostEqual(vertical_wavenumber(1.0, 2.0), 1j * np.sqrt(3.0))
        self.assertEqual(vertical_wavenumber(1.0, 1.0), 0)

    def test_negative_zero_imaginary_part_flips(self):
        kz = vertical_wavenumber(complex(1.0, -0.0), 2.0)
        self.assertGreaterEqual(kz.imag, 0)
        self.assertEqual(kz.real, 0)

    def test_squares_back(self):
        k = 1.3 + 0.01j
        k_rho = np.linspace(0, 5, 41)
        np.testing.assert_allclose(vertical_wavenumber(k, k_rho) ** 2, k ** 2 - k_rho ** 2, rtol=1e-13, atol=1e-13)

    def test_lossy_upgoing_wave_decays(self):
        k = 2.0 * (1 + 1e-4j)
        k_rho = np.linspace(0, 20, 401)
        kz = vertical_wavenumber(k, k_rho)
        self.assertTrue(np.all(kz.real >= 0))
        self.assertTrue(np.all(np.abs(np.exp(1j * kz * 3.0)) <= 1.0))

    def test_layer_bundle(self):
        stack = LayerStack(
            [0.0], (Material.vacuum(), Material.elastic(1.0, 2.0, 1.0)), ProblemKind.ELASTIC,
        )
        bundle = layer_wavenumbers(stack, 1.0, 0.5)
        self.assertTrue(np.isnan(bundle.k_c[0]))
        self.assertAlmostEqual(bundle.k_sz[1], np.sqrt(0.75))
        self.assertAlmostEqual(max_wavenumber(stack, 1.0), 1.0)

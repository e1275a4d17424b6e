# cli/tests.py
import csv
import io
import json
import tempfile
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from scipy.optimize import brentq

from basis_algebra.models import SpectralPoint
from core.exceptions import ConfigError
from maxwell.free_space import em_free_space_b
from oracle.closed_form import spatial_free_GE, spectral_free_GE
from oracle.halfspace import oracle_halfspace_reflection
from stack.models import Material
from stack.wavenumbers import vertical_wavenumber
from .models import ExitCode, Problem
from .serializers import parse_config
from .writers import render_csv, render_json

FIXTURES = Path(__file__).resolve().parent / 'fixtures'


def fixture(name):
    return json.loads((FIXTURES / name).read_text(encoding='utf-8'))


def single_em_config(**changes):
    config = {
        'schema_version': 1,
        'problem': 'maxwell',
        'omega': 1.0,
        'stack': {'interfaces': [], 'materials': [{'kind': 'em', 'epsilon': 2.0, 'mu': 1.0}]},
        'source': {'z': 0.0},
        'sweep': {'k_rho': [0.3, 0.8, 2.0], 'alpha': 0.6},
        'targets': {'z': [0.7, -0.4]},
    }
    config.update(changes)
    return config


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write_config(self, data, name='config.json'):
        path = Path(self.tmp.name) / name
        path.write_text(json.dumps(data), encoding='utf-8')
        return str(path)

    def run_command(self, name, *args, **options):
        out, err = io.StringIO(), io.StringIO()
        call_command(name, *args, stdout=out, stderr=err, **options)
        return out.getvalue(), err.getvalue()

    def read_rows(self, path):
        with open(path, encoding='utf-8', newline='') as fh:
            return list(csv.DictReader(fh))

    def assertExitCode(self, code, name, **options):
        with self.assertRaises(CommandError) as caught:
            self.run_command(name, **options)
        self.assertEqual(caught.exception.returncode, code)
        return caught.exception


class ConfigTests(SimpleTestCase):

    def test_valid_config(self):
        config = parse_config(single_em_config())
        self.assertEqual(config.problem, Problem.MAXWELL)
        self.assertEqual(config.k_rho, (0.3, 0.8, 2.0))
        self.assertEqual(config.source, (0.0, 0.0, 0.0))
        self.assertEqual(config.stack.layer_count, 1)

    def test_missing_omega_names_the_field(self):
        data = single_em_config()
        del data['omega']
        with self.assertRaisesMessage(ConfigError, 'omega'):
            parse_config(data)

    def test_unknown_key(self):
        with self.assertRaisesMessage(ConfigError, 'colour'):
            parse_config(single_em_config(colour='red'))

    def test_nested_unknown_key(self):
        data = single_em_config()
        data['stack']['materials'][0]['sigma'] = 1.0
        with self.assertRaisesMessage(ConfigError, 'stack.materials[0].sigma'):
            parse_config(data)

    def test_list_items_use_bracket_paths(self):
        data = single_em_config()
        data['stack'] = {
            'interfaces': [0.0, 'deep'],
            'materials': [{'kind': 'em', 'epsilon': 1.0, 'mu': 1.0}] * 3,
        }
        with self.assertRaisesMessage(ConfigError, 'stack.interfaces[1]: '):
            parse_config(data)

        data = single_em_config(targets={'points': [[0.0, 0.0, 1.0], [0.0, True, 1.0]]})
        with self.assertRaisesMessage(ConfigError, 'targets.points[1][1]: '):
            parse_config(data)

    def test_numbers_must_be_numbers(self):
        for value in ('1.0', True, None):
            with self.assertRaisesMessage(ConfigError, 'omega'):
                parse_config(single_em_config(omega=value))

    def test_schema_version(self):
        with self.assertRaisesMessage(ConfigError, 'schema_version'):
            parse_config(single_em_config(schema_version=2))

    def test_material_count(self):
        data = single_em_config()
        data['stack']['interfaces'] = [0.0]
        with self.assertRaisesMessage(ConfigError, 'stack'):
            parse_config(data)

    def test_source_on_interface(self):
        data = fixture('halfspace_em.json')
        data['source']['z'] = 0.0
        with self.assertRaisesMessage(ConfigError, 'source'):
            parse_config(data)

    def test_linspace_sweep(self):
        config = parse_config(fixture('halfspace_em.json'))
        np.testing.assert_allclose(config.k_rho, [0.0, 0.3, 0.6, 0.9])

    def test_quadrature_rtol_range(self):
        with self.assertRaisesMessage(ConfigError, 'quadrature'):
            parse_config(single_em_config(quadrature={'rtol': 0.5}))


class WriterTests(SimpleTestCase):

    def test_csv_digits(self):
        text = render_csv(['a', 'b'], [[0.1, 'ok']])
        self.assertEqual(text, 'a,b\n0.10000000000000001,ok\n')

    def test_json_nan_is_null(self):
        records = json.loads(render_json(['a'], [[float('nan')]]))
        self.assertEqual(records, [{'a': None}])


class SpectralCommandTests(CommandTestCase):

    def test_golden_header(self):
        out_path = str(Path(self.tmp.name) / 'out.csv')
        self.run_command('spectral', config=self.write_config(fixture('halfspace_em.json')), out=out_path)
        header = Path(out_path).read_text(encoding='utf-8').splitlines()[0] + '\n'
        self.assertEqual(header, (FIXTURES / 'spectral_maxwell_GE_header.csv').read_text(encoding='utf-8'))

    def test_single_layer_is_free_space(self):
        out_path = str(Path(self.tmp.name) / 'out.csv')
        self.run_command('spectral', config=self.write_config(single_em_config()), out=out_path)
        rows = self.read_rows(out_path)
        self.assertEqual(len(rows), 6)
        material = Material.em(2.0, 1.0)
        for row in rows:
            k_rho, z = float(row['k_rho']), float(row['z'])
            expected = spectral_free_GE(1.0, material, SpectralPoint.from_polar(k_rho, 0.6), z, 0.0)
            actual = np.array([
                float(row[f'Re_GE{i}{j}']) + 1j * float(row[f'Im_GE{i}{j}']) for i in (1, 2, 3) for j in (1, 2, 3)
            ]).reshape(3, 3)
            np.testing.assert_allclose(actual, expected, rtol=1e-12, atol=1e-15)
            self.assertEqual(row['status'], 'ok')

    def test_halfspace_b1_matches_reflection(self):
        data = fixture('halfspace_em.json')
        out_path = str(Path(self.tmp.name) / 'out.csv')
        self.run_command('spectral', config=self.write_config(data), out=out_path)
        upper = Material.em(1.0, 1.0)
        materials = (upper, Material.em(4.0, 1.0))
        for row in self.read_rows(out_path):
            k_rho, z = float(row['k_rho']), float(row['z'])
            if z < 0:
                continue
            b1_free, _, _ = em_free_space_b(1.0, upper, k_rho, z, 0.5)
            incident, _, _ = em_free_space_b(1.0, upper, k_rho, 0.0, 0.5)
            reflection = oracle_halfspace_reflection('TE', materials, 1.0, k_rho)
            kz = vertical_wavenumber(1.0, k_rho)
            expected = b1_free + reflection * incident * np.exp(1j * kz * z)
            actual = float(row['Re_b1']) + 1j * float(row['Im_b1'])
            self.assertAlmostEqual(abs(actual - expected) / abs(expected), 0.0, places=12)

    def test_normal_incidence_coefficients_are_null_in_json(self):
        config = single_em_config(sweep={'k_rho': [0.0]}, output={'format': 'json'})
        out_path = str(Path(self.tmp.name) / 'out.json')
        self.run_command('spectral', config=self.write_config(config), out=out_path)
        records = json.loads(Path(out_path).read_text(encoding='utf-8'))
        self.assertEqual(len(records), 2)
        self.assertIsNone(records[0]['Re_c1'])
        self.assertIsNotNone(records[0]['Re_GE11'])

    def test_repeat_runs_are_byte_identical(self):
        path = self.write_config(fixture('halfspace_em.json'))
        outputs = []
        for threads in (1, 3):
            out_path = str(Path(self.tmp.name) / f'out{threads}.csv')
            self.run_command('spectral', config=path, out=out_path, threads=threads)
            outputs.append(Path(out_path).read_bytes())
        self.assertEqual(outputs[0], outputs[1])

    def test_stdout_without_path(self):
        out, _ = self.run_command('spectral', config=self.write_config(single_em_config()))
        self.assertTrue(out.startswith('k_rho,z,'))
        self.assertEqual(len(out.splitlines()), 7)

    def test_sweep_through_branch_point(self):
        config = single_em_config(
            stack={'interfaces': [], 'materials': [{'kind': 'em', 'epsilon': 1.0, 'mu': 1.0}]},
            sweep={'k_rho': {'start': 0.0, 'stop': 2.0, 'count': 5}},
            targets={'z': [0.5]},
        )
        path = self.write_config(config)
        out_path = str(Path(self.tmp.name) / 'out.csv')
        _, err = self.run_command('spectral', config=path, out=out_path)
        rows = self.read_rows(out_path)
        self.assertEqual([row['status'] for row in rows], ['ok', 'ok', 'singular', 'ok', 'ok'])
        self.assertEqual(rows[2]['Re_b1'], 'nan')
        self.assertNotEqual(rows[3]['Re_b1'], 'nan')
        self.assertIn('1 rows flagged singular', err)
        self.assertExitCode(ExitCode.SINGULAR, 'spectral', config=path, out=out_path, strict=True)

    def test_missing_omega_exit_code(self):
        data = single_em_config()
        del data['omega']
        error = self.assertExitCode(ExitCode.CONFIG_ERROR, 'spectral', config=self.write_config(data))
        self.assertIn('omega', str(error))

    def test_missing_config_file(self):
        self.assertExitCode(ExitCode.CONFIG_ERROR, 'spectral', config=str(Path(self.tmp.name) / 'nope.json'))

    def test_wrong_source_phase(self):
        data = fixture('solid_four_layers.json')
        data['problem'] = 'elastic-vector'
        self.assertExitCode(ExitCode.CONFIG_ERROR, 'spectral', config=self.write_config(data))


@override_settings(LAYERED_GREEN={'CONDITION_LIMIT': 1e8})
class SingularSweepTests(CommandTestCase):

    def setUp(self):
        super().setUp()
        k_s, k_c = 1.0, 1 / np.sqrt(3.0)

        def rayleigh(k):
            k_sq = k * k
            return (2 * k_sq - k_s ** 2) ** 2 - 4 * k_sq * np.sqrt(k_sq - k_s ** 2) * np.sqrt(k_sq - k_c ** 2)

        root = brentq(rayleigh, 1 + 1e-9, 2.0, xtol=1e-15)
        self.config = {
            'schema_version': 1,
            'problem': 'elastic-tensor',
            'omega': 1.0,
            'stack': {
                'interfaces': [0.0],
                'materials': [{'kind': 'vacuum'}, {'kind': 'elastic', 'rho': 1.0, 'lam': 1.0, 'mu': 1.0}],
            },
            'source': {'z': -0.5},
            'sweep': {'k_rho': [0.5, root]},
            'targets': {'z': [-0.2]},
        }

    def test_singular_row_is_flagged(self):
        out_path = str(Path(self.tmp.name) / 'out.csv')
        _, err = self.run_command('spectral', config=self.write_config(self.config), out=out_path)
        rows = self.read_rows(out_path)
        self.assertEqual([row['status'] for row in rows], ['ok', 'singular'])
        self.assertEqual(rows[1]['Re_G11'], 'nan')
        self.assertIn('singular', err)

    def test_strict_exit_code(self):
        self.assertExitCode(
            ExitCode.SINGULAR, 'spectral', config=self.write_config(self.config),
            out=str(Path(self.tmp.name) / 'out.csv'), strict=True,
        )

    def test_validate_skips_singular_point(self):
        _, err = self.run_command('validate', config=self.write_config(self.config))
        self.assertIn('skipped', err)


class SpatialCommandTests(CommandTestCase):

    def spatial_config(self, points):
        return single_em_config(
            omega=3.0,
            stack={'interfaces': [], 'materials': [{'kind': 'em', 'epsilon': 1.0, 'mu': 1.0}]},
            sweep={'k_rho': []},
            targets={'points': points},
            quadrature={'panels': 40, 'rtol': 1e-8},
        )

    def test_empty_targets(self):
        out_path = str(Path(self.tmp.name) / 'out.csv')
        self.run_command('spatial', config=self.write_config(self.spatial_config([])), out=out_path)
        lines = Path(out_path).read_text(encoding='utf-8').splitlines()
        self.assertEqual(len(lines), 1)
        self.assertTrue(lines[0].startswith('x,y,z,Re_GE11'))

    def test_free_space_targets(self):
        points = [[0.8 * np.cos(a), 0.8 * np.sin(a), 1.0] for a in (0.0, 1.0, 2.0)]
        out_path = str(Path(self.tmp.name) / 'out.csv')
        self.run_command('spatial', config=self.write_config(self.spatial_config(points)), out=out_path, threads=2)
        lossy = Material.em(1.0, 1.0).with_loss(1e-5)
        for row, point in zip(self.read_rows(out_path), points):
            actual = np.array([
                float(row[f'Re_GE{i}{j}']) + 1j * float(row[f'Im_GE{i}{j}']) for i in (1, 2, 3) for j in (1, 2, 3)
            ]).reshape(3, 3)
            expected = spatial_free_GE(3.0, lossy, (0.0, 0.0, 0.0), point)
            self.assertLess(np.abs(actual - expected).max() / np.abs(expected).max(), 1e-5)

    def test_elastic_header(self):
        data = fixture('solid_four_layers.json')
        data['targets'] = {'points': []}
        out_path = str(Path(self.tmp.name) / 'out.csv')
        self.run_command('spatial', config=self.write_config(data), out=out_path)
        self.assertEqual(
            Path(out_path).read_text(encoding='utf-8'),
            (FIXTURES / 'spatial_elastic_header.csv').read_text(encoding='utf-8'),
        )


class ValidateCommandTests(CommandTestCase):

    def test_four_solid_layers_pass(self):
        out, _ = self.run_command('validate', config=self.write_config(fixture('solid_four_layers.json')))
        self.assertIn('interface', out)
        self.assertNotIn('FAIL', out)

    def test_corrupted_coefficients_fail(self):
        data = fixture('solid_four_layers.json')
        data['validation'] = {'perturb': 1e-6}
        error = self.assertExitCode(ExitCode.VALIDATION_FAILED, 'validate', config=self.write_config(data))
        self.assertIn('interface', str(error))

    def test_em_halfspace_pass(self):
        out, _ = self.run_command('validate', config=self.write_config(fixture('halfspace_em.json')))
        for name in ('interface', 'radiation', 'b3 identity', 'rotation', 'oracle'):
            self.assertIn(name, out)


class SelfcheckCommandTests(CommandTestCase):

    def test_default_run(self):
        out, _ = self.run_command('selfcheck')
        self.assertIn('product table', out)
        self.assertIn('restricted closure', out)
        self.assertNotIn('FAIL', out)

    def test_seed_is_deterministic(self):
        first, _ = self.run_command('selfcheck', seed=7)
        second, _ = self.run_command('selfcheck', seed=7)
        self.assertEqual(first, second)

    def test_verbose_table(self):
        out, _ = self.run_command('selfcheck', verbose=True)
        self.assertIn('J9', out)
        self.assertEqual(len(out.splitlines()), 4 + 10)

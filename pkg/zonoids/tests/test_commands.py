import csv
import json
import shutil
import tempfile
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

INSTANCES = Path(settings.BASE_DIR) / 'instances'


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        self.out = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.out, ignore_errors=True)

    def call(self, *args, **options):
        stdout = StringIO()
        call_command(*args, out=str(self.out), stdout=stdout, **options)
        return stdout.getvalue()

    def read_json(self, name):
        return json.loads((self.out / name).read_text())

    def read_csv(self, name):
        with open(self.out / name, newline='') as stream:
            return list(csv.DictReader(stream))


class VerifyCommandTest(CommandTestCase):

    def test_local_logbm_cube_cross(self):
        output = self.call('verify', 'local-logbm', str(INSTANCES / 'cube_cross.json'))
        self.assertIn('lhs=8 rhs=16/3 deficit=8/3', output)
        report = self.read_json('local-logbm.json')
        self.assertEqual(report['verdict'], 'holds')
        self.assertEqual(report['deficit'], '8/3')
        rows = self.read_csv('local-logbm.csv')
        self.assertEqual(list(rows[0]), ['name', 'n', 'verdict', 'deficit', 'exact_deficit'])
        self.assertEqual(rows[0]['exact_deficit'], '8/3')

    def test_local_logbm_equality(self):
        self.call('verify', 'local-logbm', str(INSTANCES / 'cube_box123.json'))
        self.assertEqual(self.read_json('local-logbm.json')['verdict'], 'equality')

    def test_bm_homothetic(self):
        self.call('verify', 'bm', str(INSTANCES / 'cube_double.json'))
        report = self.read_json('bm.json')
        self.assertEqual(report['lhs'], '27')
        self.assertEqual(report['verdict'], 'equality')

    def test_minkowski_first(self):
        output = self.call('verify', 'mink1', str(INSTANCES / 'cube_cross.json'))
        self.assertIn('lhs=512 rhs=256/3', output)

    def test_minkowski_second_with_flat_polytope(self):
        path = self.out / 'flat.json'
        path.write_text(json.dumps({
            'bodies': {
                'cube': {'kind': 'zonotope', 'dim': 3, 'generators': [
                    {'u': [1, 0, 0], 'lambda': '1'}, {'u': [0, 1, 0], 'lambda': '1'},
                    {'u': [0, 0, 1], 'lambda': '1'}]},
                'needle': {'kind': 'polytope', 'dim': 3, 'vertices': [[0, 0, 1]]},
            },
            'task': {'K': 'cube', 'L': 'needle'},
        }))
        output = self.call('verify', 'mink2', str(path))
        self.assertIn('lhs=64/9 rhs=0', output)
        self.assertEqual(self.read_json('mink2.json')['verdict'], 'holds')

    def test_log_minkowski_is_float(self):
        self.call('verify', 'logmink', str(INSTANCES / 'cube_cross.json'))
        rows = self.read_csv('logmink.csv')
        self.assertEqual(rows[0]['verdict'], 'holds')
        self.assertEqual(rows[0]['exact_deficit'], '')

    def test_induction_step(self):
        self.call('verify', 'indstep', str(INSTANCES / 'cube_cross.json'))
        self.assertEqual(self.read_json('indstep.json')['rhs'], '2')

    def test_alexandrov_equality(self):
        self.call('verify', 'alexandrov-eq', str(INSTANCES / 'cube_box123.json'))
        report = self.read_json('alexandrov-eq.json')
        self.assertEqual(report['verdict'], 'equality')
        self.assertEqual(report['details']['a'], '2')

    def test_projection_identity(self):
        self.call('verify', 'projection', str(INSTANCES / 'cube_cross.json'))
        report = self.read_json('projection-identity.json')
        self.assertEqual((report['lhs'], report['rhs']), ('4', '4'))

    def test_mixed_discriminant(self):
        self.call('verify', 'mixdisc', str(INSTANCES / 'mixdisc.json'))
        report = self.read_json('mixdisc.json')
        self.assertEqual((report['lhs'], report['rhs']), ('0', '-1'))

    def test_superlich_circle(self):
        self.call('verify', 'superlich', str(INSTANCES / 'ellipse.json'))
        report = self.read_json('superlich-circle.json')
        self.assertIn(report['verdict'], ('holds', 'equality'))
        self.assertFalse(report['exact'])

    def test_superlich_sphere(self):
        self.call('verify', 'superlich', str(INSTANCES / 'ball_ellipsoid.json'), level=2)
        self.assertEqual(self.read_json('superlich.json')['details']['level'], 2)

    def test_missing_task_entry(self):
        with self.assertRaises(CommandError) as cm:
            self.call('verify', 'bm', str(INSTANCES / 'ellipse.json'))
        self.assertEqual(cm.exception.returncode, 4)

    def test_malformed_json(self):
        path = self.out / 'broken.json'
        path.write_text('{"bodies": ')
        with self.assertRaises(CommandError) as cm:
            self.call('verify', 'mink1', str(path))
        self.assertEqual(cm.exception.returncode, 4)

    def test_unreadable_file(self):
        with self.assertRaises(CommandError) as cm:
            self.call('verify', 'mink1', str(self.out / 'missing.json'))
        self.assertEqual(cm.exception.returncode, 4)

    def test_precondition_exit_code(self):
        path = self.out / 'square.json'
        path.write_text(json.dumps({
            'bodies': {'square': {'kind': 'zonotope', 'dim': 2, 'generators': [
                {'u': [1, 0], 'lambda': '1'}, {'u': [0, 1], 'lambda': '1'}]}},
            'task': {'K': 'square', 'L': 'square', 'u': [1, 0]},
        }))
        with self.assertRaises(CommandError) as cm:
            self.call('verify', 'indstep', str(path))
        self.assertEqual(cm.exception.returncode, 3)


class CertifyCommandTest(CommandTestCase):

    def test_certificate(self):
        output = self.call('certify', str(INSTANCES / 'cube_box123.json'))
        self.assertIn('equality: 3 components', output)
        certificate = self.read_json('certificate.json')
        self.assertEqual(certificate['components'], [[0], [1], [2]])
        self.assertEqual(certificate['scales'], ['1', '2', '3'])

    def test_refutation(self):
        output = self.call('certify', str(INSTANCES / 'cube_cross.json'))
        self.assertIn('refuted: inequality strict', output)
        self.assertEqual(self.read_json('refutation.json')['deficit'], '8/3')


class SpectrumCommandTest(CommandTestCase):

    def test_circle(self):
        output = self.call('spectrum', str(INSTANCES / 'ellipse.json'), grid=128, top=4)
        self.assertIn('holds', output)
        rows = self.read_csv('spectrum.csv')
        self.assertEqual(len(rows), 128)
        self.assertEqual(list(rows[0]), ['index', 'parity', 'eigenvalue'])
        self.assertAlmostEqual(float(rows[0]['eigenvalue']), 1.0, places=6)

    def test_sphere_residuals(self):
        self.call('spectrum', str(INSTANCES / 'ball_ellipsoid.json'), levels=[1, 2])
        rows = self.read_csv('residuals.csv')
        self.assertEqual([row['level'] for row in rows], ['1', '2'])


class MeasureCommandTest(CommandTestCase):

    def test_surface_measure(self):
        self.call('measure', str(INSTANCES / 'cube_cross.json'))
        measure = self.read_json('measure.json')
        self.assertEqual(len(measure['atoms']), 6)
        self.assertEqual({atom['c'] for atom in measure['atoms']}, {'4'})

    def test_named_slots(self):
        self.call('measure', str(INSTANCES / 'cube_cross.json'), 'cross', 'cube')
        self.assertEqual(len(self.read_json('measure.json')['atoms']), 12)

    def test_unknown_slot(self):
        with self.assertRaises(CommandError) as cm:
            self.call('measure', str(INSTANCES / 'cube_cross.json'), 'sphere', 'cube')
        self.assertEqual(cm.exception.returncode, 4)

    def test_cone_volume(self):
        self.call('measure', str(INSTANCES / 'cube_cross.json'), cone=True)
        self.assertEqual(self.read_json('measure.json')['convention'], 'unit')


class RandomSuiteCommandTest(CommandTestCase):

    def test_no_trials(self):
        output = self.call('randomsuite', trials=0)
        self.assertIn('violations: 0', output)
        summary = self.read_json('summary.json')
        self.assertEqual(summary['trials'], 0)
        self.assertEqual(summary['rows'], [])

    def test_seeded_runs_repeat(self):
        self.call('randomsuite', trials=3, seed=11, dim=2)
        first = (self.out / 'summary.json').read_bytes()
        for threads in (4, 8):
            self.call('randomsuite', trials=3, seed=11, dim=2, threads=threads)
            self.assertEqual((self.out / 'summary.json').read_bytes(), first)
        summary = json.loads(first)
        self.assertEqual(summary['violations'], 0)
        self.assertEqual(summary['dims'], [2, 2])
        self.assertTrue(summary['rows'])

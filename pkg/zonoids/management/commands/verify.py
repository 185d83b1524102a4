import math

from zonoids import inequalities, spectral
from zonoids.bodies import SupportExpr
from zonoids.equality import check_alexandrov_equality
from zonoids.exceptions import InstanceParseError
from zonoids.management.base import VerificationCommand
from zonoids.mixedvol import projection_identity_check
from zonoids.reports import load_instance, write_report


def _expression(instance):
    f = instance.expression()
    if f is None:
        raise InstanceParseError('The task needs L or f.')
    return f


def _circle_function(f: SupportExpr):
    return lambda theta: float(f.support((math.cos(theta), math.sin(theta))))


def run_check(name, instance, options):
    """Evaluate check ``name`` on the task of a parsed bodies file."""
    if name == 'bm':
        K, L, t = instance.require('K', 'L', 't')
        return inequalities.check_bm(K, L, t)
    if name == 'mink1':
        return inequalities.check_minkowski_first(*instance.require('K', 'L'))
    if name == 'mink2':
        return inequalities.check_minkowski_second(*instance.require('K', 'L'))
    if name == 'local-logbm':
        K, = instance.require('K')
        return inequalities.check_local_logbm(K, _expression(instance))
    if name == 'logmink':
        return inequalities.check_log_minkowski(*instance.require('K', 'L'))
    if name == 'indstep':
        K, u = instance.require('K', 'u')
        return inequalities.check_induction_step(K, _expression(instance), u)
    if name == 'alexandrov-eq':
        return check_alexandrov_equality(*instance.require('K', 'L'))
    if name == 'hilbert':
        return inequalities.check_hilbert_projection(*instance.require('K', 'L'))
    if name == 'km-spectral':
        return inequalities.check_km_spectral_form(*instance.require('K', 'L'))
    if name == 'projection':
        K, u = instance.require('K', 'u')
        return projection_identity_check(u, [K] * (K.dim - 1))
    if name == 'superlich':
        K, = instance.require('K')
        f = _expression(instance)
        if K.dim == 2:
            return spectral.check_superlich_circle(K, _circle_function(f), N=instance.task.get('N'))
        return spectral.check_superlich_quadrature(K, f, level=options.get('level') or instance.task.get('level'))
    if name == 'bochner':
        K, = instance.require('K')
        return spectral.check_bochner(K, _expression(instance), levels=options.get('levels'))
    if name == 'geomean':
        K, L, t = instance.require('K', 'L', 't')
        return inequalities.check_geomean_logbm(
            K, L, t, sample_budget=instance.task.get('directions'), seed=options.get('seed') or 0)
    if name == 'mixdisc':
        A, B = instance.require('A', 'B')
        return inequalities.check_alexandrov_mixed_discriminant(A, B, instance.task.get('M', []))
    raise InstanceParseError('Unknown check %r.' % name)


CHECK_NAMES = ['bm', 'mink1', 'mink2', 'local-logbm', 'logmink', 'indstep', 'alexandrov-eq',
               'superlich', 'bochner', 'geomean', 'mixdisc', 'hilbert', 'km-spectral', 'projection']


class Command(VerificationCommand):
    help = 'Evaluate one inequality on the task of a bodies file and write JSON and CSV reports.'

    def add_arguments(self, parser):
        parser.add_argument('name', choices=CHECK_NAMES)
        parser.add_argument('bodies_file')
        super().add_arguments(parser)
        parser.add_argument('--seed', type=int, default=None, help='Seed for sampled directions.')
        parser.add_argument('--level', type=int, default=None, help='Icosahedral subdivision level.')
        parser.add_argument('--levels', type=int, nargs=2, default=None, metavar=('LOW', 'HIGH'),
                            help='Subdivision levels of the Bochner sweep.')

    def run(self, *args, **options):
        instance = load_instance(options['bodies_file'], backend=options['backend'])
        report = run_check(options['name'], instance, options)
        json_path, csv_path = write_report(report, self.output_dir(options))
        self.stdout.write('%s (n=%d): lhs=%s rhs=%s deficit=%s' % (
            report.name, report.dim, report.lhs, report.rhs, report.deficit))
        if report.details.get('untested'):
            self.stdout.write(self.style.WARNING('untested: %s' % report.details['untested']))
        self.finish(report.verdict, '%s: %s (reports: %s, %s)' % (
            report.name, report.verdict.value, json_path, csv_path))

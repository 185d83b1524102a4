from pathlib import Path

from zonoids import spectral
from zonoids.conf import logbm_settings
from zonoids.exceptions import InstanceParseError
from zonoids.management.base import VerificationCommand
from zonoids.reports import load_instance, residual_csv, spectrum_csv, write_bytes
from zonoids.verdicts import Verdict


class Command(VerificationCommand):
    help = ('Circle spectrum of the Hilbert operator of a planar smooth K, or the '
            'Bochner residual table of (K, f) on the sphere.')

    def add_arguments(self, parser):
        parser.add_argument('bodies_file')
        super().add_arguments(parser)
        parser.add_argument('--grid', type=int, default=None, help='Circle grid size (even).')
        parser.add_argument('--levels', type=int, nargs=2, default=None, metavar=('LOW', 'HIGH'))
        parser.add_argument('--top', type=int, default=8, help='Eigenvalues to print.')

    def run(self, *args, **options):
        instance = load_instance(options['bodies_file'], backend='float')
        K, = instance.require('K')
        out = Path(self.output_dir(options))
        if K.dim == 2:
            return self.circle(K, out, options)
        f = instance.expression()
        if f is None:
            raise InstanceParseError('The residual table needs L or f in the task.')
        table = spectral.bochner_convergence(K, f, options['levels'])
        path = write_bytes(out / 'residuals.csv', residual_csv(table).encode())
        for row in table:
            self.stdout.write('level %d: side1=%.12g side2=%.12g residual=%.3g' % (
                row.level, row.side1, row.side2, row.residual))
        self.stdout.write(self.style.SUCCESS('residual table: %s' % path))

    def circle(self, K, out, options):
        spectrum = spectral.circle_spectrum(K, options['grid'])
        path = write_bytes(out / 'spectrum.csv', spectrum_csv(spectrum).encode())
        for index, parity, value in spectrum.rows()[:options['top']]:
            self.stdout.write('%4d %-4s %.9f' % (index, parity, value))
        top = spectrum.top_even_orthogonal()
        threshold = -1 + logbm_settings.TOLERANCE['SPECTRAL']
        self.stdout.write('principal eigenvalue %.9f; top even eigenvalue off h_K %.9f' % (
            spectrum.principal_eigenvalue, top))
        verdict = Verdict.HOLDS if top <= threshold else Verdict.VIOLATED
        self.finish(verdict, 'even threshold -1: %s (%s)' % (verdict.value, path))

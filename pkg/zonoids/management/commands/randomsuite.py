from pathlib import Path

from zonoids.management.base import VerificationCommand
from zonoids.reports import REPORT_COLUMNS, csv_text, render_json, write_bytes
from zonoids.serializers import SuiteSummarySerializer
from zonoids.suite import SuiteConfig, run_random_suite, with_overrides
from zonoids.verdicts import Verdict


class Command(VerificationCommand):
    help = 'Run seeded random trials of every checker and write a summary report.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--trials', type=int, default=None)
        parser.add_argument('--dim', type=int, default=None, help='Fix the dimension of every trial.')
        parser.add_argument('--threads', type=int, default=None, help='Trial-level parallelism.')

    def run(self, *args, **options):
        dim = options['dim']
        config = with_overrides(
            SuiteConfig(),
            seed=options['seed'],
            trials=options['trials'],
            dims=(dim, dim) if dim else None,
            backend=options['backend'],
            tolerance=options['tolerance'],
            out_dir=options['out'],
            threads=options['threads'],
        )
        summary = run_random_suite(config)
        serializer = SuiteSummarySerializer(summary)
        out = Path(config.out_dir)
        write_bytes(out / 'summary.json', render_json(serializer.data))
        write_bytes(out / 'summary.csv', csv_text(summary['rows'], REPORT_COLUMNS).encode())

        self.stdout.write('trials: %d (seed %d)' % (summary['trials'], summary['seed']))
        for name, deficit in summary['min_deficit'].items():
            counts = ', '.join('%s=%d' % item for item in summary['counts'][name].items())
            self.stdout.write('  %-12s min deficit %-14.6g %s' % (name, deficit, counts))
        for key, count in summary['errors'].items():
            self.stdout.write(self.style.WARNING('  skipped %s: %d' % (key, count)))
        for path in summary['witnesses']:
            self.stdout.write(self.style.ERROR('  witness: %s' % path))
        verdict = Verdict.VIOLATED if summary['violations'] else Verdict.HOLDS
        self.finish(verdict, 'violations: %d' % summary['violations'])

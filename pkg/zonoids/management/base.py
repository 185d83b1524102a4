import logging

from django.core.management.base import BaseCommand, CommandError

from ..conf import logbm_settings, override_tolerance
from ..exceptions import VerificationError
from ..verdicts import Verdict

logger = logging.getLogger(__name__)


class VerificationCommand(BaseCommand):
    """
    Shared flags and exit-code mapping: engine errors leave with their own
    exit code, a violated verdict with 2.
    """

    def add_arguments(self, parser):
        parser.add_argument('--backend', choices=['exact', 'float'], default=None,
                            help='Scalar backend for parsed instances (default: settings).')
        parser.add_argument('--out', default=None, help='Directory for JSON and CSV reports.')
        parser.add_argument('--tolerance', type=float, default=None,
                            help='Override the float verdict tolerance.')

    def output_dir(self, options):
        return options['out'] or logbm_settings.SUITE['OUTPUT_DIR']

    def handle(self, *args, **options):
        try:
            with override_tolerance(FLOAT=options.get('tolerance')):
                return self.run(*args, **options)
        except VerificationError as exc:
            logger.debug('%s: %s', exc.__class__.__name__, exc)
            raise CommandError('%s: %s' % (exc.__class__.__name__, exc), returncode=exc.exit_code)

    def run(self, *args, **options):
        raise NotImplementedError

    def finish(self, verdict: Verdict, message):
        if verdict is Verdict.VIOLATED:
            raise CommandError(message, returncode=verdict.exit_code)
        self.stdout.write(self.style.SUCCESS(message))

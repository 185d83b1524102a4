from pathlib import Path

from zonoids.equality import DecompositionCertificate, certify_equality
from zonoids.management.base import VerificationCommand
from zonoids.reports import load_instance, render_json, write_bytes
from zonoids.serializers import CertificateSerializer, RefutationSerializer


class Command(VerificationCommand):
    help = 'Certify an equality case (K, L) of the local log-Brunn-Minkowski inequality.'

    def add_arguments(self, parser):
        parser.add_argument('bodies_file')
        super().add_arguments(parser)

    def run(self, *args, **options):
        instance = load_instance(options['bodies_file'], backend=options['backend'])
        K, L = instance.require('K', 'L')
        result = certify_equality(K, L)
        out = Path(self.output_dir(options))
        if isinstance(result, DecompositionCertificate):
            path = write_bytes(out / 'certificate.json', render_json(CertificateSerializer(result).data))
            self.stdout.write(self.style.SUCCESS(
                'equality: %d components, dims %s, scales %s (%s)' % (
                    len(result.components), result.dims,
                    ', '.join(str(s) for s in result.scales), path)))
        else:
            path = write_bytes(out / 'refutation.json', render_json(RefutationSerializer(result).data))
            self.stdout.write(self.style.WARNING('refuted: %s: %s (%s)' % (result.reason, result.detail, path)))

from pathlib import Path

from zonoids.exceptions import InstanceParseError
from zonoids.management.base import VerificationCommand
from zonoids.mixedvol import cone_volume_measure, mixed_area_measure
from zonoids.reports import load_instance, render_json, write_bytes
from zonoids.serializers import BodySerializer, MeasureSerializer
from zonoids.spectral import planar_generating_measure


class Command(VerificationCommand):
    help = 'Dump a mixed area measure, a cone-volume measure or a planar generating measure as JSON.'

    def add_arguments(self, parser):
        parser.add_argument('bodies_file')
        parser.add_argument('slots', nargs='*', help='Body names filling the n-1 slots (default: K).')
        super().add_arguments(parser)
        group = parser.add_mutually_exclusive_group()
        group.add_argument('--cone', action='store_true', help='Cone-volume measure of K.')
        group.add_argument('--generating', action='store_true',
                           help='Generating zonotope of a planar symmetric K.')

    def run(self, *args, **options):
        instance = load_instance(options['bodies_file'], backend=options['backend'])
        out = Path(self.output_dir(options))
        if options['cone'] or options['generating']:
            K, = instance.require('K')
            if options['generating']:
                data = BodySerializer(planar_generating_measure(K)).data
            else:
                data = MeasureSerializer(cone_volume_measure(K)).data
        else:
            names = options['slots']
            unknown = [name for name in names if name not in instance.bodies]
            if unknown:
                raise InstanceParseError('Unknown bodies: %s.' % ', '.join(unknown))
            if names:
                slots = [instance.bodies[name] for name in names]
            else:
                K, = instance.require('K')
                slots = [K] * (K.dim - 1)
            data = MeasureSerializer(mixed_area_measure(slots)).data
        path = write_bytes(out / 'measure.json', render_json(data))
        self.stdout.write(render_json(data).decode())
        self.stdout.write(self.style.SUCCESS('measure: %s' % path))

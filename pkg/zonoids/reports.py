"""
Reading instance files and writing JSON / CSV reports.

CSV columns are fixed:

* verdict rows: ``name, n, verdict, deficit, exact_deficit``
* spectrum tables: ``index, parity, eigenvalue``
* residual tables: ``level, side1, side2, residual``
"""
import csv
import io
import logging
from pathlib import Path

from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from . import arith
from .exceptions import InstanceParseError
from .serializers import BodiesFileSerializer, InequalityReportSerializer

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ['name', 'n', 'verdict', 'deficit', 'exact_deficit']
SPECTRUM_COLUMNS = ['index', 'parity', 'eigenvalue']
RESIDUAL_COLUMNS = ['level', 'side1', 'side2', 'residual']


def parse_json(content: bytes):
    try:
        return JSONParser().parse(io.BytesIO(content))
    except ParseError as exc:
        raise InstanceParseError('Malformed JSON: %s' % exc.detail)


def render_json(data) -> bytes:
    return JSONRenderer().render(data, renderer_context={'indent': 2})


def load_instance(path, backend=None):
    """Parse a bodies file into an ``Instance`` with constructed bodies."""
    try:
        content = Path(path).read_bytes()
    except OSError as exc:
        raise InstanceParseError('Cannot read %s: %s' % (path, exc.strerror))
    serializer = BodiesFileSerializer(data=parse_json(content), context={'backend': backend})
    if not serializer.is_valid():
        raise InstanceParseError('Invalid bodies file %s: %s' % (path, dict(serializer.errors)))
    instance = serializer.save()
    logger.debug('Loaded %d bodies from %s.', len(instance.bodies), path)
    return instance


def dump_instance(instance, path):
    write_bytes(path, render_json(BodiesFileSerializer(instance).data))


def write_bytes(path, content: bytes):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(content)
    return path


def report_row(report):
    deficit = report.deficit
    return {
        'name': report.name,
        'n': report.dim,
        'verdict': report.verdict.value,
        'deficit': float(deficit),
        'exact_deficit': arith.format_scalar(deficit) if report.exact else '',
    }


def csv_text(rows, columns) -> str:
    stream = io.StringIO()
    writer = csv.DictWriter(stream, fieldnames=columns, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return stream.getvalue()


def report_csv(reports) -> str:
    return csv_text([report_row(r) for r in reports], REPORT_COLUMNS)


def spectrum_csv(spectrum) -> str:
    return csv_text(
        [dict(zip(SPECTRUM_COLUMNS, (i, parity, repr(value)))) for i, parity, value in spectrum.rows()],
        SPECTRUM_COLUMNS)


def residual_csv(table) -> str:
    return csv_text(
        [{'level': row.level, 'side1': repr(row.side1), 'side2': repr(row.side2),
          'residual': repr(row.residual)} for row in table],
        RESIDUAL_COLUMNS)


def write_report(report, out_dir, stem=None):
    """Write ``<stem>.json`` and ``<stem>.csv``; returns both paths."""
    stem = stem or report.name
    out_dir = Path(out_dir)
    json_path = write_bytes(out_dir / ('%s.json' % stem), render_json(InequalityReportSerializer(report).data))
    csv_path = write_bytes(out_dir / ('%s.csv' % stem), report_csv([report]).encode())
    return json_path, csv_path

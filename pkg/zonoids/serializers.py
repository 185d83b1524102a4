"""
JSON schemas for bodies, measures, reports and instance files.

Exact scalars are written as "p/q" strings (q omitted when 1) and floats as
JSON numbers. A ``backend`` entry in the serializer context forces every
parsed scalar onto that backend.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from rest_framework import serializers

from . import arith
from .bodies import GeoMeanBody, SmoothBody, SupportExpr, SymmetricPolytope, Zonotope
from .exceptions import InstanceParseError
from .mixedvol import LENGTH, UNIT, AtomicSphericalMeasure
from .verdicts import Verdict


class ScalarField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected a JSON number or a "p/q" string, got {value!r}.',
    }

    def to_representation(self, value):
        return arith.format_scalar(value)

    def to_internal_value(self, data):
        backend = self.context.get('backend')
        try:
            if backend is not None:
                return arith.get_backend(backend).scalar(data)
            if isinstance(data, float):
                return arith.FLOAT.scalar(data)
            return arith.EXACT.scalar(data)
        except (TypeError, ValueError, ZeroDivisionError):
            self.fail('invalid', value=data)


class VectorField(serializers.ListField):
    child = ScalarField()

    def to_representation(self, data):
        return [self.child.to_representation(x) for x in data]


class VerdictField(serializers.ChoiceField):

    def __init__(self, **kwargs):
        super().__init__(choices=[v.value for v in Verdict], **kwargs)

    def to_representation(self, value):
        return Verdict(value).value

    def to_internal_value(self, data):
        return Verdict(super().to_internal_value(data))


def jsonable(value):
    """Free-form report data (details, witnesses) as plain JSON values."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return arith.format_scalar(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (Zonotope, SymmetricPolytope, SmoothBody)):
        return BodySerializer(value).data
    if isinstance(value, SupportExpr):
        return {'kind': 'expr', 'dim': value.dim,
                'terms': [{'alpha': arith.format_scalar(a), 'body': jsonable(b)} for a, b in value.terms]}
    if isinstance(value, AtomicSphericalMeasure):
        return MeasureSerializer(value).data
    if isinstance(value, GeoMeanBody):
        return {'kind': 'geomean', 'K': jsonable(value.K), 'L': jsonable(value.L), 't': jsonable(value.t)}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


class DetailsField(serializers.Field):

    def to_representation(self, value):
        return jsonable(value)

    def to_internal_value(self, data):
        return data


# Bodies

class GeneratorSerializer(serializers.Serializer):
    u = VectorField(min_length=1)

    def get_fields(self):
        fields = super().get_fields()
        fields['lambda'] = ScalarField()
        return fields

    def to_representation(self, instance):
        u, weight = instance
        return {'u': self.fields['u'].to_representation(u),
                'lambda': arith.format_scalar(weight)}


class BodySerializer(serializers.Serializer):
    KINDS = ('zonotope', 'polytope', 'smooth')

    kind = serializers.ChoiceField(choices=KINDS)
    dim = serializers.IntegerField(min_value=1)
    generators = GeneratorSerializer(many=True, required=False)
    vertices = serializers.ListField(child=VectorField(min_length=1), required=False)
    matrices = serializers.ListField(
        child=serializers.ListField(child=serializers.ListField(child=serializers.FloatField())),
        required=False, min_length=1)

    REQUIRED = {'zonotope': 'generators', 'polytope': 'vertices', 'smooth': 'matrices'}

    def validate(self, attrs):
        key = self.REQUIRED[attrs['kind']]
        if key not in attrs:
            raise serializers.ValidationError({key: 'A %s body needs "%s".' % (attrs['kind'], key)})
        dim = attrs['dim']
        if key == 'generators':
            vectors = [g['u'] for g in attrs['generators']]
        elif key == 'vertices':
            vectors = attrs['vertices']
        else:
            vectors = [row for m in attrs['matrices'] for row in m] + [m for m in attrs['matrices']]
        if any(len(v) != dim for v in vectors):
            raise serializers.ValidationError({key: 'Entries must have dimension %d.' % dim})
        return attrs

    def create(self, validated_data):
        return build_body(validated_data)

    def to_representation(self, instance):
        data = {'kind': instance.kind, 'dim': instance.dim}
        if isinstance(instance, Zonotope):
            data['generators'] = GeneratorSerializer(instance.generators, many=True).data
        elif isinstance(instance, SymmetricPolytope):
            data['vertices'] = [[arith.format_scalar(x) for x in v] for v in instance.vertices]
        else:
            data['matrices'] = [[[float(x) for x in row] for row in m] for m in instance.matrices]
        return data


def build_body(data):
    """Construct the body described by validated ``BodySerializer`` data."""
    kind, dim = data['kind'], data['dim']
    if kind == 'zonotope':
        return Zonotope.from_generators([(g['u'], g['lambda']) for g in data['generators']], dim=dim)
    if kind == 'polytope':
        return SymmetricPolytope.from_vertices(data['vertices'], dim=dim)
    return SmoothBody.from_matrices(data['matrices'])


class AtomSerializer(serializers.Serializer):
    w = VectorField(min_length=1)
    c = ScalarField()

    def to_representation(self, instance):
        w, c = instance
        return {'w': self.fields['w'].to_representation(w), 'c': arith.format_scalar(c)}


class MeasureSerializer(serializers.Serializer):
    dim = serializers.IntegerField(min_value=1)
    convention = serializers.ChoiceField(choices=[LENGTH, UNIT], default=LENGTH)
    atoms = AtomSerializer(many=True)

    def create(self, validated_data):
        return AtomicSphericalMeasure.from_atoms(
            validated_data['dim'], [(a['w'], a['c']) for a in validated_data['atoms']],
            validated_data['convention'])


# Reports

class InequalityReportSerializer(serializers.Serializer):
    name = serializers.CharField()
    dim = serializers.IntegerField()
    lhs = ScalarField()
    rhs = ScalarField()
    deficit = ScalarField()
    verdict = VerdictField()
    form = serializers.CharField(allow_blank=True, required=False)
    exact = serializers.BooleanField()
    error_bound = serializers.FloatField(allow_null=True, required=False)
    details = DetailsField(required=False)
    witness = DetailsField(required=False)


class CertificateSerializer(serializers.Serializer):
    components = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))
    dims = serializers.ListField(child=serializers.IntegerField())
    scales = VectorField()
    residual = DetailsField(required=False)


class RefutationSerializer(serializers.Serializer):
    reason = serializers.CharField()
    detail = serializers.CharField(allow_blank=True)
    witness_atoms = DetailsField()
    deficit = ScalarField(allow_null=True, required=False)


class ProbeReportSerializer(serializers.Serializer):
    equal_measures = serializers.BooleanField()
    same_body = serializers.BooleanField()
    max_discrepancy = ScalarField()
    atoms = serializers.ListField(child=serializers.IntegerField())


class SuiteRowSerializer(serializers.Serializer):
    name = serializers.CharField()
    n = serializers.IntegerField()
    verdict = VerdictField()
    deficit = serializers.FloatField()
    exact_deficit = serializers.CharField(allow_blank=True)


class SuiteSummarySerializer(serializers.Serializer):
    seed = serializers.IntegerField()
    trials = serializers.IntegerField(min_value=0)
    dims = serializers.ListField(child=serializers.IntegerField())
    backend = serializers.CharField()
    violations = serializers.IntegerField()
    counts = DetailsField()
    min_deficit = DetailsField()
    errors = DetailsField()
    witnesses = serializers.ListField(child=serializers.CharField())
    rows = SuiteRowSerializer(many=True)


# Instance files

class TermSerializer(serializers.Serializer):
    alpha = ScalarField()
    body = serializers.CharField()


class TaskSerializer(serializers.Serializer):
    K = serializers.CharField(required=False)
    L = serializers.CharField(required=False)
    t = ScalarField(required=False)
    u = VectorField(required=False, min_length=1)
    f = TermSerializer(many=True, required=False)
    a = ScalarField(required=False)
    level = serializers.IntegerField(required=False, min_value=0)
    N = serializers.IntegerField(required=False, min_value=8)
    directions = serializers.IntegerField(required=False, min_value=1)
    A = serializers.ListField(child=VectorField(), required=False)
    B = serializers.ListField(child=VectorField(), required=False)
    M = serializers.ListField(child=serializers.ListField(child=VectorField()), required=False)


@dataclass
class Instance:
    bodies: dict
    task: dict = field(default_factory=dict)

    def body(self, key):
        name = self.task.get(key)
        return self.bodies[name] if name is not None else None

    def require(self, *keys):
        """Task entries by key, with K and L resolved to bodies."""
        missing = [key for key in keys if key not in self.task]
        if missing:
            raise InstanceParseError('The task needs %s.' % ', '.join(missing))
        return [self.body(key) if key in ('K', 'L') else self.task[key] for key in keys]

    def expression(self):
        """The task's f: explicit terms, else h_L - a h_K, else h_L."""
        if 'f' in self.task:
            return SupportExpr.combine(*((t['alpha'], self.bodies[t['body']]) for t in self.task['f']))
        L = self.body('L')
        if L is None:
            return None
        if 'a' in self.task and self.body('K') is not None:
            return SupportExpr.combine((1, L), (-self.task['a'], self.body('K')))
        return SupportExpr.of(L)


class BodiesFileSerializer(serializers.Serializer):
    bodies = serializers.DictField(child=BodySerializer())
    task = TaskSerializer(required=False)

    def validate(self, attrs):
        names = set(attrs['bodies'])
        task = attrs.get('task', {})
        missing = [task[key] for key in ('K', 'L') if key in task and task[key] not in names]
        missing += [term['body'] for term in task.get('f', []) if term['body'] not in names]
        if missing:
            raise serializers.ValidationError({'task': 'Unknown bodies: %s.' % ', '.join(sorted(set(missing)))})
        return attrs

    def create(self, validated_data):
        bodies = {name: build_body(data) for name, data in validated_data['bodies'].items()}
        return Instance(bodies, dict(validated_data.get('task', {})))

    def to_representation(self, instance):
        data = {'bodies': {name: BodySerializer(body).data for name, body in instance.bodies.items()}}
        if instance.task:
            data['task'] = jsonable(instance.task)
        return data

import math
import re

from rest_framework import serializers

from .exceptions import UnknownIdentityError
from .identities import ParameterPoint, get_identity

FORMAT_CHOICES = [
    ('json', 'JSON report'),
    ('csv', 'CSV table'),
]

AXES = ('nu', 'mu', 'z', 'a')

_NUMBER = r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'
_LITERAL_RE = re.compile(rf'^(?:[+-]?{_NUMBER}|(?:[+-]?{_NUMBER})?[+-]?(?:{_NUMBER})?[ij])$')


def _split_imaginary(literal):
    """Index of the sign that starts the imaginary part, or 0"""
    for index in range(len(literal) - 1, 0, -1):
        if literal[index] in '+-' and literal[index - 1] not in 'eE':
            return index
    return 0


def _coefficient(text):
    if text in ('', '+'):
        return 1.0
    if text == '-':
        return -1.0
    return float(text)


def parse_complex(text):
    """
    Parse a complex literal: "1.5", "-2i", "0.3+1e-2i", "1-i", "i".
    Numbers pass through. Raises ValueError on anything else.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a complex literal: {text!r}")
    if isinstance(text, (int, float, complex)):
        value = complex(text)
    else:
        literal = str(text).strip().replace(' ', '')
        if not literal or not _LITERAL_RE.match(literal):
            raise ValueError(f"not a complex literal: {text!r}")
        if literal[-1] in 'ij':
            body = literal[:-1]
            split = _split_imaginary(body)
            real = float(body[:split]) if split else 0.0
            value = complex(real, _coefficient(body[split:]))
        else:
            value = complex(float(literal), 0.0)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"complex literal must be finite: {text!r}")
    return value


def finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


class ComplexField(serializers.Field):
    """Complex literal on input, {"re": x, "im": y} on output"""

    default_error_messages = {
        'invalid': 'Enter a complex literal such as "1.5", "2i" or "0.3-1.2i".',
    }

    def to_internal_value(self, data):
        if isinstance(data, dict) and set(data) <= {'re', 'im'}:
            data = complex(data.get('re', 0.0), data.get('im', 0.0))
        try:
            return parse_complex(data)
        except (TypeError, ValueError):
            self.fail('invalid')

    def to_representation(self, value):
        if value is None:
            return None
        value = complex(value)
        return {'re': finite_or_none(value.real), 'im': finite_or_none(value.imag)}


class FiniteFloatField(serializers.FloatField):
    """Float on output with NaN and infinities written as null"""

    def to_representation(self, value):
        return finite_or_none(value)


def _clean(value):
    if isinstance(value, float):
        return finite_or_none(value)
    if isinstance(value, complex):
        return ComplexField().to_representation(value)
    if isinstance(value, dict):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    return value


class ParameterPointSerializer(serializers.Serializer):
    nu = ComplexField(required=False, default=0j)
    mu = ComplexField(required=False, default=0j)
    z = ComplexField(required=False, default=0j)
    a = ComplexField(required=False, default=0j)

    def create(self, validated_data):
        return ParameterPoint(**validated_data)


def _validate_identity(value):
    try:
        get_identity(value)
    except UnknownIdentityError:
        raise serializers.ValidationError(f"Unknown identity: {value}")
    return value


class GridEntrySerializer(serializers.Serializer):
    """One identity with its own sampling"""

    identity = serializers.CharField()
    nu = serializers.ListField(child=ComplexField(), required=False)
    mu = serializers.ListField(child=ComplexField(), required=False)
    z = serializers.ListField(child=ComplexField(), required=False)
    a = serializers.ListField(child=ComplexField(), required=False)
    tol = serializers.FloatField(required=False, min_value=0.0)

    def validate_identity(self, value):
        return _validate_identity(value)


class GridConfigSerializer(serializers.Serializer):
    """
    Verification run configuration.

    Top-level axis lists apply to every id in `identities`; entries of
    `grids` carry their own. Missing axes sample the single value 0.
    """

    identities = serializers.ListField(child=serializers.CharField(), required=False, default=list)
    nu = serializers.ListField(child=ComplexField(), required=False)
    mu = serializers.ListField(child=ComplexField(), required=False)
    z = serializers.ListField(child=ComplexField(), required=False)
    a = serializers.ListField(child=ComplexField(), required=False)
    grids = GridEntrySerializer(many=True, required=False, default=list)
    tolerances = serializers.DictField(
        child=serializers.FloatField(min_value=0.0), required=False, default=dict
    )
    output = serializers.CharField(required=False, allow_blank=True, default='')
    format = serializers.ChoiceField(choices=FORMAT_CHOICES, required=False, default='json')

    def validate_identities(self, value):
        return [_validate_identity(identity) for identity in value]

    def validate_tolerances(self, value):
        for identity in value:
            _validate_identity(identity)
        return value

    def validate(self, data):
        if not data.get('identities') and not data.get('grids'):
            raise serializers.ValidationError("Config must name at least one identity")
        return data


class VerificationRecordSerializer(serializers.Serializer):
    identity_id = serializers.CharField()
    point = ParameterPointSerializer()
    lhs = ComplexField(source='lhs_value', allow_null=True)
    rhs = ComplexField(source='rhs_value', allow_null=True)
    abs_err = FiniteFloatField(allow_null=True)
    rel_err = FiniteFloatField(allow_null=True)
    tolerance = FiniteFloatField()
    passed = serializers.BooleanField()
    status = serializers.CharField()
    converged = serializers.BooleanField()
    report_only = serializers.BooleanField()
    diagnostics = serializers.SerializerMethodField()

    def get_diagnostics(self, obj):
        return {key: _clean(obj.diagnostics[key]) for key in sorted(obj.diagnostics)}


class IdentitySummarySerializer(serializers.Serializer):
    identity = serializers.CharField()
    tested = serializers.IntegerField()
    passed = serializers.IntegerField()
    failed = serializers.IntegerField()
    skipped = serializers.IntegerField()
    report_only = serializers.BooleanField()
    max_rel_err = FiniteFloatField(allow_null=True)

    def to_representation(self, instance):
        data = super().to_representation(instance)
        if instance.wall_time is not None:
            data['wall_time'] = round(instance.wall_time, 6)
        return data


class RunReportSerializer(serializers.Serializer):
    tool = serializers.CharField()
    version = serializers.CharField()
    config = serializers.SerializerMethodField()
    summary = IdentitySummarySerializer(many=True)
    records = VerificationRecordSerializer(many=True)

    def get_config(self, obj):
        return _clean(obj.config)


class IdentityDescriptorSerializer(serializers.Serializer):
    """Catalog listing"""

    id = serializers.CharField()
    equation = serializers.CharField()
    label = serializers.CharField()
    formula = serializers.CharField()
    domain = serializers.CharField(source='domain_text')
    anchor = serializers.CharField()
    default_tol = serializers.FloatField()
    report_only = serializers.BooleanField()
    notes = serializers.CharField()

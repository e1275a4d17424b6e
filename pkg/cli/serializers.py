"""
运行配置 (JSON, schema_version = 1) 的校验。

所有 serializer 都拒绝未知键; 数值只接受 JSON number, 字符串和布尔值一律报错。
校验通过后 serializer.save() 得到只读的 RunConfig。
"""
import json
import math
from collections.abc import Mapping

import numpy as np
from rest_framework import serializers
from rest_framework.settings import api_settings

from core.exceptions import ConfigError, InvalidStack, OnInterface
from hankel.models import QuadratureSpec
from maxwell.models import FieldKind
from stack.models import LayerStack, Material, MaterialKind, ProblemKind
from stack.wavenumbers import locate_layer
from .models import OutputFormat, Problem, RunConfig

SCHEMA_VERSION = 1


class StrictFloatField(serializers.FloatField):
    default_error_messages = {
        'invalid': 'A number is required.',
        'non_finite': 'Number must be finite.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            self.fail('invalid')
        if not math.isfinite(data):
            self.fail('non_finite')
        return float(data)


class StrictIntegerField(serializers.IntegerField):
    default_error_messages = {'invalid': 'An integer is required.'}

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, int):
            self.fail('invalid')
        return data


class StrictSerializer(serializers.Serializer):
    """未声明的键直接报错"""

    def to_internal_value(self, data):
        if isinstance(data, Mapping):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ['Unknown field.'] for key in unknown})
        return super().to_internal_value(data)


class MaterialSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=MaterialKind.choices)
    epsilon = StrictFloatField(required=False, default=0.0)
    mu = StrictFloatField(required=False, default=0.0)
    rho = StrictFloatField(required=False, default=0.0)
    lam = StrictFloatField(required=False, default=0.0)

    def validate(self, attrs):
        try:
            return Material(**attrs)
        except InvalidStack as exc:
            raise serializers.ValidationError(str(exc)) from None


class StackSerializer(StrictSerializer):
    interfaces = serializers.ListField(child=StrictFloatField(), allow_empty=True)
    materials = MaterialSerializer(many=True, allow_empty=False)


class SourceSerializer(StrictSerializer):
    x = StrictFloatField(required=False, default=0.0)
    y = StrictFloatField(required=False, default=0.0)
    z = StrictFloatField()


class LinspaceSerializer(StrictSerializer):
    start = StrictFloatField(min_value=0)
    stop = StrictFloatField(min_value=0)
    count = StrictIntegerField(min_value=1)


class SampleField(serializers.Field):
    """k_rho 取样: 数值列表, 或 {"start", "stop", "count"} 等分"""
    default_error_messages = {'invalid': 'Expected a list of numbers or a {start, stop, count} object.'}

    def to_internal_value(self, data):
        if isinstance(data, list):
            values = serializers.ListField(child=StrictFloatField(min_value=0)).run_validation(data)
            return tuple(values)
        if isinstance(data, Mapping):
            serializer = LinspaceSerializer(data=data)
            serializer.is_valid(raise_exception=True)
            v = serializer.validated_data
            return tuple(np.linspace(v['start'], v['stop'], v['count']).tolist())
        self.fail('invalid')

    def to_representation(self, value):
        return list(value)


class SweepSerializer(StrictSerializer):
    k_rho = SampleField()
    alpha = StrictFloatField(required=False, default=0.0)


class TargetsSerializer(StrictSerializer):
    z = serializers.ListField(child=StrictFloatField(), required=False, default=list)
    points = serializers.ListField(
        child=serializers.ListField(child=StrictFloatField(), min_length=3, max_length=3),
        required=False, default=list,
    )


class OutputSerializer(StrictSerializer):
    path = serializers.CharField(required=False, allow_null=True, default=None)
    format = serializers.ChoiceField(choices=OutputFormat.choices, default=OutputFormat.CSV)


class QuadratureSerializer(StrictSerializer):
    truncation = StrictFloatField(required=False)
    panels = StrictIntegerField(required=False, min_value=1)
    rtol = StrictFloatField(required=False)
    loss = StrictFloatField(required=False, min_value=0)

    def validate(self, attrs):
        try:
            return QuadratureSpec.from_settings(**attrs)
        except ConfigError as exc:
            raise serializers.ValidationError(str(exc)) from None


class ValidationSerializer(StrictSerializer):
    # 对解出的反射系数做相对扰动, 用来确认残差检查确实会失败
    perturb = StrictFloatField(required=False, default=0.0)


class RunConfigSerializer(StrictSerializer):
    schema_version = StrictIntegerField()
    problem = serializers.ChoiceField(choices=Problem.choices)
    omega = StrictFloatField()
    stack = StackSerializer()
    source = SourceSerializer()
    sweep = SweepSerializer(required=False)
    targets = TargetsSerializer(required=False)
    output = OutputSerializer(required=False)
    quadrature = QuadratureSerializer(required=False)
    loss = StrictFloatField(required=False, min_value=0)
    field = serializers.ChoiceField(choices=FieldKind.choices, default=FieldKind.GE)
    validation = ValidationSerializer(required=False)

    def validate_schema_version(self, value):
        if value != SCHEMA_VERSION:
            raise serializers.ValidationError(f"Unsupported schema version {value}, expected {SCHEMA_VERSION}.")
        return value

    def validate_omega(self, value):
        if value <= 0:
            raise serializers.ValidationError("Angular frequency must be positive.")
        return value

    def validate(self, attrs):
        problem = Problem(attrs['problem'])
        kind = ProblemKind.MAXWELL if problem == Problem.MAXWELL else ProblemKind.ELASTIC
        try:
            stack = LayerStack(tuple(attrs['stack']['interfaces']), tuple(attrs['stack']['materials']), kind)
        except InvalidStack as exc:
            raise serializers.ValidationError({'stack': [str(exc)]}) from None

        source = attrs['source']
        try:
            locate_layer(stack, source['z'])
        except OnInterface as exc:
            raise serializers.ValidationError({'source': [str(exc)]}) from None

        attrs['stack'] = stack
        attrs['source'] = (source['x'], source['y'], source['z'])
        return attrs

    def create(self, validated_data):
        sweep = validated_data.get('sweep', {})
        targets = validated_data.get('targets', {})
        output = validated_data.get('output', {})
        validation = validated_data.get('validation', {})
        return RunConfig(
            problem=Problem(validated_data['problem']),
            omega=validated_data['omega'],
            stack=validated_data['stack'],
            source=validated_data['source'],
            k_rho=tuple(sweep.get('k_rho', ())),
            alpha=sweep.get('alpha', 0.0),
            depths=tuple(targets.get('z', ())),
            points=tuple(tuple(p) for p in targets.get('points', ())),
            output_path=output.get('path'),
            output_format=output.get('format', OutputFormat.CSV),
            quadrature=validated_data.get('quadrature'),
            loss=validated_data.get('loss'),
            field=validated_data['field'],
            perturb=validation.get('perturb', 0.0),
        )


def _join(prefix, key):
    # ListField 的错误以下标为键, ListSerializer 的错误是列表; 两者都写成 [i]
    if isinstance(key, int) or (isinstance(key, str) and key.isdigit()):
        return f'{prefix}[{key}]'
    return f'{prefix}.{key}' if prefix else str(key)


def flatten_errors(errors, prefix=''):
    """DRF 的嵌套错误 -> ["stack.materials[1].mu: ...", "stack.interfaces[0]: ...", ...]"""
    if isinstance(errors, Mapping):
        for key, value in errors.items():
            name = prefix if key == api_settings.NON_FIELD_ERRORS_KEY else _join(prefix, key)
            yield from flatten_errors(value, name)
    elif isinstance(errors, list) and not all(isinstance(e, str) for e in errors):
        for index, value in enumerate(errors):
            yield from flatten_errors(value, _join(prefix, index))
    elif isinstance(errors, list):
        for message in errors:
            yield f'{prefix or "config"}: {message}'
    else:
        yield f'{prefix or "config"}: {errors}'


def parse_config(data):
    serializer = RunConfigSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError('; '.join(flatten_errors(serializer.errors)))
    return serializer.save()


def load_config(path):
    try:
        with open(path, encoding='utf-8') as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(data)

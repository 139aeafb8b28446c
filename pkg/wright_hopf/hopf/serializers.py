import re

from rest_framework import serializers

from .bifurcation import H_MAX, H_MIN, LIMIT_RATIO
from .dde_sim import MIN_STEPS_PER_DELAY
from .nonlinearity import PRESETS, from_cubic, make_builtin

FORMATS = ('csv', 'json')

_RANGE_PATTERN = re.compile(r'^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$')
_GRID_PATTERN = re.compile(r'^\s*(-?[\d.eE+-]+?)\s*\.\.\s*(-?[\d.eE+-]+)\s*:\s*(\d+)\s*$')


def parse_k_range(value: str) -> range:
    """'-2..4' -> range(-2, 5)"""
    match = _RANGE_PATTERN.match(str(value))
    if not match:
        raise serializers.ValidationError(f'Диапазон k задаётся как "a..b", получено {value!r}')
    lo, hi = int(match.group(1)), int(match.group(2))
    if lo > hi:
        raise serializers.ValidationError(f'Начало диапазона {lo} больше конца {hi}')
    return range(lo, hi + 1)


def parse_eta_grid(value) -> list:
    """Список через запятую или равномерная сетка 'a..b:n'"""
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    match = _GRID_PATTERN.match(str(value))
    try:
        if match:
            lo, hi, count = float(match.group(1)), float(match.group(2)), int(match.group(3))
            if count < 2:
                return [lo]
            return [lo + (hi - lo) * j / (count - 1) for j in range(count)]
        return [float(v) for v in str(value).split(',') if v.strip()]
    except ValueError:
        raise serializers.ValidationError(f'Не удалось разобрать сетку eta: {value!r}')


class RunConfigSerializer(serializers.Serializer):
    """
    Проверка параметров запуска, общая для команд и API
    """
    preset = serializers.CharField(required=False, allow_null=True)
    cubic = serializers.ListField(child=serializers.FloatField(), min_length=3, max_length=3,
                                  required=False, allow_null=True)
    k = serializers.IntegerField(required=False, default=0)
    k_range = serializers.CharField(required=False, default='0..3')
    eta = serializers.FloatField(required=False, allow_null=True)
    eta_grid = serializers.JSONField(required=False, allow_null=True)
    mu = serializers.FloatField(required=False, allow_null=True)
    amplitude = serializers.FloatField(required=False, default=0.1)
    step = serializers.FloatField(required=False, allow_null=True)
    t_end = serializers.FloatField(required=False, allow_null=True)
    format = serializers.ChoiceField(choices=FORMATS, required=False, default='csv')
    output = serializers.CharField(required=False, allow_null=True, allow_blank=True)

    def validate_preset(self, value):
        if value is None:
            return value
        if value not in PRESETS and not value.startswith('cubic('):
            raise serializers.ValidationError(f'Неизвестный пресет {value!r}, доступны: {", ".join(PRESETS)}')
        return value

    def validate_step(self, value):
        if value is None:
            return value
        m = round(1.0 / value) if value > 0 else 0
        if m < MIN_STEPS_PER_DELAY or abs(m * value - 1.0) > 1e-12:
            raise serializers.ValidationError(f'Шаг должен быть 1/m с целым m >= {MIN_STEPS_PER_DELAY}')
        return value

    def validate_t_end(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError('t_end должно быть положительным')
        return value

    def validate_eta(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError('eta должно быть положительным')
        return value

    def validate_k_range(self, value):
        parse_k_range(value)
        return value

    def validate_eta_grid(self, value):
        if value is None:
            return value
        grid = parse_eta_grid(value)
        if not grid or any(not eta > 0 for eta in grid):
            raise serializers.ValidationError('Все eta должны быть положительными')
        return sorted(grid)

    def validate(self, data):
        sources = [name for name in ('preset', 'cubic') if data.get(name) is not None]
        if len(sources) != 1:
            raise serializers.ValidationError('Укажите ровно один источник нелинейности: preset или cubic')
        if data.get('cubic') is not None and data['cubic'][0] == 0:
            raise serializers.ValidationError({'cubic': "f'(0) не может быть нулём"})
        return data

    def nonlinearity(self):
        data = self.validated_data
        if data.get('cubic') is not None:
            return from_cubic(*data['cubic'])
        return make_builtin(data['preset'])

    def k_values(self) -> range:
        return parse_k_range(self.validated_data['k_range'])


class BifurcationPointSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    mu_k = serializers.FloatField()
    omega_k = serializers.FloatField()
    direction = serializers.CharField()
    delta_k = serializers.IntegerField(allow_null=True)
    branch_side = serializers.CharField(allow_null=True)
    K = serializers.FloatField()
    H = serializers.FloatField()
    crossing_speed = serializers.FloatField()
    mu_original = serializers.FloatField()


class SequenceSerializer(serializers.Serializer):
    case = serializers.CharField()
    n = serializers.IntegerField(allow_null=True)
    ratio = serializers.FloatField(allow_null=True)
    degenerate_k = serializers.ListField(child=serializers.IntegerField())
    h_min = serializers.SerializerMethodField()
    h_limit = serializers.SerializerMethodField()
    h_max = serializers.SerializerMethodField()

    def get_h_min(self, obj):
        return H_MIN

    def get_h_limit(self, obj):
        return LIMIT_RATIO

    def get_h_max(self, obj):
        return H_MAX


class PeriodBoundSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    eta = serializers.FloatField()
    lower = serializers.FloatField(allow_null=True)
    upper = serializers.FloatField(allow_null=True)
    source = serializers.CharField()


class SweepRowSerializer(serializers.Serializer):
    eta = serializers.FloatField()
    mu = serializers.FloatField()
    amplitude = serializers.FloatField()
    period = serializers.FloatField()
    bound_lower = serializers.FloatField(allow_null=True)
    bound_upper = serializers.FloatField(allow_null=True)
    source = serializers.CharField()
    within_bounds = serializers.BooleanField(allow_null=True)


class SweepSerializer(serializers.Serializer):
    nonlinearity = serializers.CharField()
    k = serializers.IntegerField()
    direction = serializers.CharField()
    case = serializers.CharField()
    n = serializers.IntegerField(allow_null=True)
    rows = SweepRowSerializer(many=True)
    slope = serializers.FloatField(allow_null=True)
    intercept = serializers.FloatField(allow_null=True)
    r_squared = serializers.FloatField(allow_null=True)


class CookeRowSerializer(serializers.Serializer):
    k = serializers.IntegerField()
    l = serializers.IntegerField()
    mu_out = serializers.FloatField()
    T_out = serializers.FloatField()
    branch_ok = serializers.BooleanField()
    orbit_residual = serializers.FloatField(allow_null=True)
    equation_residual = serializers.FloatField(allow_null=True)


class OrbitResidualSerializer(serializers.Serializer):
    l = serializers.IntegerField()
    residual = serializers.FloatField()


class CookeReportSerializer(serializers.Serializer):
    all_branches_ok = serializers.BooleanField()
    mu = serializers.FloatField(allow_null=True)
    equation_residual = serializers.FloatField(allow_null=True)
    orbit_residuals = OrbitResidualSerializer(many=True)
    rows = CookeRowSerializer(many=True)

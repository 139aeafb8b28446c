"""
Вывод результатов: CSV (модуль csv) и JSON (JSONRenderer DRF).
Все числа с плавающей точкой печатаются с 12 значащими цифрами.
"""
import csv
import io
import logging
from typing import Iterable, List, Optional

from django.conf import settings
from rest_framework.renderers import JSONRenderer

from .bifurcation import Direction, SequenceClassification, classify_nonlinearity, classify_sequence
from .dde_sim import SweepTable
from .nonlinearity import Nonlinearity
from .period_bounds import BoundSource, bound_for
from .serializers import BifurcationPointSerializer, PeriodBoundSerializer, SequenceSerializer, SweepSerializer

logger = logging.getLogger(__name__)

# допуски сравнения измеренного периода с оценками
SUPERCRITICAL_ABS_TOL = 1e-3
SUBCRITICAL_REL_TOL = 0.02
SWITCHING_SOURCES = (BoundSource.THM4_INTERIOR, BoundSource.THM4_EDGE)


def format_value(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f'{value:.{settings.HOPF_SIGNIFICANT_DIGITS}g}'
    return str(value)


def round_floats(data):
    if isinstance(data, float):
        return float(format_value(data))
    if isinstance(data, dict):
        return {key: round_floats(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [round_floats(value) for value in data]
    return data


def render_csv(columns: List[str], rows: Iterable[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column)) for column in columns])
    return buffer.getvalue()


def render_json(data) -> str:
    return JSONRenderer().render(round_floats(data)).decode('utf-8') + '\n'


def write_report(text: str, output: Optional[str] = None, stream=None):
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text)
        logger.info('Отчёт записан в %s', output)
    else:
        stream.write(text)


def sweep_report(f: Nonlinearity, table: SweepTable, k: int = 0,
                 classification: Optional[SequenceClassification] = None) -> dict:
    """
    Строки развёртки с оценками периода и флагом попадания в них.
    Для оценок с переключением при eta > HOPF_SWITCHING_CHECK_ETA_MAX флаг пустой:
    там оценка уже не описывает ветвь
    """
    classification = classification or classify_sequence(f.B, f.C)
    eta_max = settings.HOPF_SWITCHING_CHECK_ETA_MAX
    rows = []
    for row in table.rows:
        bound = bound_for(classification, k, row.eta)
        if bound.source in SWITCHING_SOURCES and row.eta > eta_max:
            within = None
            logger.info('%s eta=%.4g: период %.8g, оценка %s не сверяется при eta > %g', f.name, row.eta,
                        row.period, bound.source.value, eta_max)
        elif table.direction == Direction.SUPERCRITICAL:
            within = bound.contains(row.period, abs_tol=SUPERCRITICAL_ABS_TOL)
        else:
            within = bound.contains(row.period, rel_tol=SUBCRITICAL_REL_TOL)
        if within is False:
            logger.warning('%s eta=%.4g: период %.8g вне оценки [%s, %s] (%s)', f.name, row.eta, row.period,
                           bound.lower, bound.upper, bound.source.value)
        rows.append(dict(row.as_dict(), bound_lower=bound.lower, bound_upper=bound.upper,
                         source=bound.source.value, within_bounds=within))
    return SweepSerializer({'nonlinearity': f.name, 'k': k, 'direction': table.direction.value,
                            'case': classification.case.value, 'n': classification.n, 'rows': rows,
                            'slope': table.slope, 'intercept': table.intercept, 'r_squared': table.r_squared}).data


SWEEP_COLUMNS = ['eta', 'mu', 'amplitude', 'period', 'bound_lower', 'bound_upper', 'source', 'within_bounds']


def classify_report(f: Nonlinearity, k_range: Iterable[int]) -> dict:
    points = classify_nonlinearity(f, k_range)
    sequence = classify_sequence(f.B, f.C)
    logger.info('%s: случай %s, n=%s', f.name, sequence.case.value, sequence.n)
    return {'nonlinearity': f.name, 'd1': f.d1_at_0, 'B': f.B, 'C': f.C,
            'points': BifurcationPointSerializer(points, many=True).data,
            'sequence': SequenceSerializer(sequence).data}


def sequence_report(f: Nonlinearity) -> dict:
    f.require_classifiable()
    sequence = classify_sequence(f.B, f.C)
    return dict(SequenceSerializer(sequence).data, nonlinearity=f.name, B=f.B, C=f.C)


def bounds_report(f: Nonlinearity, k: int, etas: Iterable[float]) -> dict:
    f.require_classifiable()
    sequence = classify_sequence(f.B, f.C)
    bounds = [bound_for(sequence, k, float(eta)) for eta in etas]
    return {'nonlinearity': f.name, 'k': k, 'case': sequence.case.value, 'n': sequence.n,
            'bounds': PeriodBoundSerializer(bounds, many=True).data}


CLASSIFY_COLUMNS = ['k', 'mu_k', 'direction', 'branch_side', 'K', 'H', 'crossing_speed', 'mu_original']
BOUNDS_COLUMNS = ['eta', 'lower', 'upper', 'source']

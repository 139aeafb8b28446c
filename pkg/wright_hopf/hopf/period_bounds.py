"""
Оценки периода T^k_eta вдоль k-й ветви Хопфа (k >= 0) через преобразование Кука.

eta = |mu - mu_k|; классификацию передаёт вызывающий код, модуль её не пересчитывает.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

from .bifurcation import Direction, SequenceCase, SequenceClassification
from .exceptions import BoundDomainError
from .spectral import critical_value

logger = logging.getLogger(__name__)


class BoundSource(str, enum.Enum):
    THM2 = 'theorem2'
    THM3 = 'theorem3'
    THM4_INTERIOR = 'theorem4-interior'
    THM4_EDGE = 'theorem4-edge'

    def __str__(self):
        return self.value


def linear_period(k: int) -> float:
    """T_0^k = 2 pi / omega_k = 4 / (4k+1)"""
    return 4.0 / (4 * k + 1)


@dataclass(frozen=True)
class PeriodBound:
    k: int
    eta: float
    lower: Optional[float]
    upper: Optional[float]
    source: BoundSource

    def contains(self, period: float, rel_tol: float = 0.0, abs_tol: float = 0.0) -> bool:
        if self.lower is not None and period < self.lower * (1.0 - rel_tol) - abs_tol:
            return False
        if self.upper is not None and period > self.upper * (1.0 + rel_tol) + abs_tol:
            return False
        return True


def _check_k(k: int):
    if k < 0:
        raise BoundDomainError(f'Оценки периода определены только для k >= 0, получено k={k}')


def _check_eta(k: int, eta: float, left_side: bool):
    if not eta > 0:
        raise BoundDomainError(f'eta={eta} должно быть положительным')
    if left_side and not 2.0 * eta / math.pi < 4 * k + 1:
        raise BoundDomainError(f'eta={eta} вне области: нужно 2 eta / pi < {4 * k + 1}')


def _subcritical_denominator(k: int, eta: float) -> float:
    return 4 * k + 1 - 2.0 * eta / math.pi


def bound_supercritical(k: int, eta: float) -> PeriodBound:
    """T^k_eta >= 4 / (4k+1 + 2 eta / pi)"""
    _check_k(k)
    _check_eta(k, eta, left_side=False)
    return PeriodBound(k=k, eta=eta, lower=4.0 / (4 * k + 1 + 2.0 * eta / math.pi), upper=None,
                       source=BoundSource.THM2)


def bound_all_subcritical(k: int, eta: float) -> PeriodBound:
    """T^k_eta <= 4 / (4k+1 - 2 eta / pi)"""
    _check_k(k)
    _check_eta(k, eta, left_side=True)
    return PeriodBound(k=k, eta=eta, lower=None, upper=4.0 / _subcritical_denominator(k, eta),
                       source=BoundSource.THM3)


def bound_switching(k: int, eta: float, n: int) -> PeriodBound:
    """
    k < n: (4 + 2eta/((n-k+1)pi)) / d < T < (4 + 2eta/((n-k)pi)) / d,
    k = n: только T > (4 + 2eta/pi) / d, где d = 4k+1 - 2eta/pi
    """
    _check_k(k)
    if n < 0:
        raise BoundDomainError(f'Индекс переключения n={n} должен быть >= 0')
    if k > n:
        raise BoundDomainError(f'k={k} > n={n}: бифуркация суперкритическая, нужна bound_supercritical')
    _check_eta(k, eta, left_side=True)
    d = _subcritical_denominator(k, eta)
    lower = (4.0 + 2.0 * eta / ((n - k + 1) * math.pi)) / d
    if k == n:
        return PeriodBound(k=k, eta=eta, lower=lower, upper=None, source=BoundSource.THM4_EDGE)
    upper = (4.0 + 2.0 * eta / ((n - k) * math.pi)) / d
    return PeriodBound(k=k, eta=eta, lower=lower, upper=upper, source=BoundSource.THM4_INTERIOR)


def bound_for(classification: SequenceClassification, k: int, eta: float) -> PeriodBound:
    """Выбирает оценку, чьи предположения выполнены для данной классификации"""
    _check_k(k)
    direction = classification.direction_at(k)
    if direction == Direction.SUPERCRITICAL:
        return bound_supercritical(k, eta)
    if direction == Direction.DEGENERATE:
        raise BoundDomainError(f'k={k}: вырожденная бифуркация, оценок нет')
    if classification.case == SequenceCase.SWITCH_NONNEG:
        return bound_switching(k, eta, classification.n)
    # AllSub, BoundaryCase, SwitchNeg: все (k+l)-е при k >= 0 субкритические
    return bound_all_subcritical(k, eta)


def cooke_consistency(k: int, l: int, eta: float, period: float, direction: Direction) -> bool:
    """
    Неравенство из доказательств оценок:
    суперкритическая: (mu_k + eta)(l T + 1) > mu_{k+l},
    субкритическая:   (mu_k - eta)(l T + 1) < mu_{k+l}
    """
    if direction == Direction.SUPERCRITICAL:
        return (critical_value(k) + eta) * (l * period + 1.0) > critical_value(k + l)
    if direction == Direction.SUBCRITICAL:
        return (critical_value(k) - eta) * (l * period + 1.0) < critical_value(k + l)
    raise BoundDomainError('Для вырожденной бифуркации неравенство не определено')


@dataclass
class MonotonicityReport:
    k: int
    subcritical: bool
    monotone_increasing: bool
    later_subcritical_required: bool
    contradiction: bool
    notes: List[str]


def monotonicity_flags(classification: SequenceClassification, k: int,
                       measured_period: Optional[float] = None) -> MonotonicityReport:
    """
    (i)  k-я субкритическая, все следующие суперкритические -> T^k_eta растёт при малых eta;
    (ii) k-я субкритическая и T^k_eta < T^k_0 -> все следующие обязаны быть субкритическими.
    """
    _check_k(k)
    notes = []
    subcritical = classification.is_subcritical(k)
    monotone = (subcritical and classification.case == SequenceCase.SWITCH_NONNEG
                and k == classification.n)
    if monotone:
        notes.append(f'k={k}: последняя субкритическая, период возрастает при малых eta')

    required = False
    contradiction = False
    if subcritical and measured_period is not None and measured_period < linear_period(k):
        required = True
        later_all_sub = classification.case in (SequenceCase.ALL_SUB, SequenceCase.BOUNDARY,
                                                SequenceCase.SWITCH_NEG)
        contradiction = not later_all_sub
        notes.append(f'k={k}: T={measured_period:.6g} < T0={linear_period(k):.6g}, '
                     f'все следующие должны быть субкритическими')
    if contradiction:
        logger.warning('k=%d: измеренный период противоречит классификации %s', k, classification.case.value)
    return MonotonicityReport(k=k, subcritical=subcritical, monotone_increasing=monotone,
                              later_subcritical_required=required, contradiction=contradiction, notes=notes)

"""
Направление бифуркаций Хопфа уравнения x'(t) = -mu f(x(t-1)).

Два независимых способа: порог H(k) в замкнутом виде и полный
коэффициент нормальной формы K, собранный из B_(a,b,c,d) и L_0
без сокращения положительных множителей.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from django.conf import settings

from .exceptions import DegenerateBifurcationError, CriticalPointError
from .nonlinearity import Nonlinearity, schwarzian
from .spectral import critical_value, crossing_speed_exact

logger = logging.getLogger(__name__)

LIMIT_RATIO = 22.0 / 15.0


class Direction(str, enum.Enum):
    SUPERCRITICAL = 'Supercritical'
    SUBCRITICAL = 'Subcritical'
    DEGENERATE = 'Degenerate'

    def __str__(self):
        return self.value


class BranchSide(str, enum.Enum):
    RIGHT = 'Right'
    LEFT = 'Left'

    def __str__(self):
        return self.value


class SequenceCase(str, enum.Enum):
    ALL_SUPER = 'AllSuper'
    SWITCH_NONNEG = 'SwitchNonneg'
    BOUNDARY = 'BoundaryCase'
    SWITCH_NEG = 'SwitchNeg'
    ALL_SUB = 'AllSub'
    DEGENERATE = 'Degenerate'

    def __str__(self):
        return self.value


def default_tol() -> float:
    return settings.HOPF_DEGENERACY_TOL


def hopf_threshold(k: int) -> float:
    """H(k) = (22(4k+1)pi - 8) / (15(4k+1)pi)"""
    m = (4 * k + 1) * math.pi
    return (22.0 * m - 8.0) / (15.0 * m)


H_MIN = hopf_threshold(0)
H_MAX = hopf_threshold(-1)


def classify(B: float, C: float, k: int, tol: Optional[float] = None) -> Direction:
    tol = default_tol() if tol is None else tol
    gap = C - hopf_threshold(k) * B ** 2
    if gap < -tol:
        return Direction.SUPERCRITICAL
    if gap > tol:
        return Direction.SUBCRITICAL
    return Direction.DEGENERATE


@dataclass(frozen=True)
class NormalFormTerms:
    B2000: complex
    B1100: complex
    B1010: complex
    B0101: complex
    B2100: complex
    L0_1: complex
    L0_theta: complex
    L0_exp2: complex
    omega: float


def normal_form_terms(B: float, C: float, k: int) -> NormalFormTerms:
    """
    Коэффициенты разложения F(x1 e^{iw} + x2 e^{-iw} + x3 + x4 e^{2iw}, 0) для
    F = -mu_k (B u^2 + C u^3), где u = x(-1) и e^{-i omega_k} = -i.
    L_0 phi = -mu_k phi(-1) на пробных функциях 1, theta e^{i omega theta}, e^{2 i omega theta}.
    """
    omega = critical_value(k)
    a = (4 * k + 1) * math.pi
    # e^{-i omega_k} = -i для всех k
    e1 = -1j
    return NormalFormTerms(
        B2000=a / 2.0 * B + 0j,
        B1100=-a * B + 0j,
        B1010=1j * a * B,
        B0101=1j * a * B,
        B2100=1.5j * a * C,
        L0_1=complex(-omega),
        L0_theta=complex(-omega * (-1.0 * e1)),
        L0_exp2=complex(-omega * e1 ** 2),
        omega=omega,
    )


def normal_form_K(B: float, C: float, k: int) -> float:
    """
    K = Re[(B2100 - B1100 B1010 / L0(1) + B2000 B0101 / (2 i w - L0(e^{2iw theta})))
           / (1 - L0(theta e^{iw theta}))]
    K > 0: субкритическая, K < 0: суперкритическая
    """
    t = normal_form_terms(B, C, k)
    bracket = (t.B2100
               - t.B1100 * t.B1010 / t.L0_1
               + t.B2000 * t.B0101 / (2j * t.omega - t.L0_exp2))
    return float((bracket / (1.0 - t.L0_theta)).real)


def branch_side(direction: Direction, k: int) -> BranchSide:
    if direction == Direction.DEGENERATE:
        raise DegenerateBifurcationError(f'Бифуркация k={k} вырождена, сторона ветви не определена')
    positive = (4 * k + 1) > 0
    supercritical = direction == Direction.SUPERCRITICAL
    return BranchSide.RIGHT if supercritical == positive else BranchSide.LEFT


@dataclass(frozen=True)
class BifurcationPoint:
    k: int
    mu_k: float
    omega_k: float
    direction: Direction
    delta_k: Optional[int]
    branch_side: Optional[BranchSide]
    K: float
    H: float
    crossing_speed: float
    mu_original: float


def bifurcation_point(B: float, C: float, k: int, tol: Optional[float] = None, d1: float = 1.0) -> BifurcationPoint:
    direction = classify(B, C, k, tol)
    mu_k = critical_value(k)
    if direction == Direction.DEGENERATE:
        delta, side = None, None
    else:
        delta = 1 if direction == Direction.SUPERCRITICAL else -1
        side = branch_side(direction, k)
    return BifurcationPoint(k=k, mu_k=mu_k, omega_k=mu_k, direction=direction, delta_k=delta,
                            branch_side=side, K=normal_form_K(B, C, k), H=hopf_threshold(k),
                            crossing_speed=crossing_speed_exact(k), mu_original=mu_k / d1)


def classify_nonlinearity(f: Nonlinearity, k_range: Iterable[int], tol: Optional[float] = None) -> List[BifurcationPoint]:
    f.require_classifiable()
    return [bifurcation_point(f.B, f.C, k, tol, d1=f.d1_at_0) for k in k_range]


@dataclass(frozen=True)
class SequenceClassification:
    case: SequenceCase
    n: Optional[int] = None
    ratio: Optional[float] = None
    degenerate_k: Tuple[int, ...] = field(default=())

    def direction_at(self, k: int) -> Direction:
        if k in self.degenerate_k or self.case == SequenceCase.DEGENERATE:
            return Direction.DEGENERATE
        sub = Direction.SUBCRITICAL
        sup = Direction.SUPERCRITICAL
        if self.case == SequenceCase.ALL_SUPER:
            return sup
        if self.case == SequenceCase.ALL_SUB:
            return sub
        if self.case == SequenceCase.SWITCH_NONNEG:
            return sub if 0 <= k <= self.n else sup
        if self.case == SequenceCase.BOUNDARY:
            return sub if k >= 0 else sup
        # SwitchNeg: k >= 0 и k <= n субкритические
        return sub if k >= 0 or k <= self.n else sup

    def is_subcritical(self, k: int) -> bool:
        return self.direction_at(k) == Direction.SUBCRITICAL


def _last_nonneg_below(ratio: float) -> int:
    """max{m >= 0: ratio > H(m)} при H(0) < ratio < 22/15"""
    # H(m) = 22/15 - 8 / (15 (4m+1) pi) < ratio  <=>  4m+1 < 8 / (15 pi (22/15 - ratio))
    bound = 8.0 / (15.0 * math.pi * (LIMIT_RATIO - ratio))
    m = max(0, int(math.floor((bound - 1.0) / 4.0)))
    while m > 0 and not ratio > hopf_threshold(m):
        m -= 1
    while ratio > hopf_threshold(m + 1):
        m += 1
    return m


def _last_negative_below(ratio: float) -> int:
    """max{m <= -1: ratio > H(m)} при 22/15 < ratio < H(-1)"""
    # для m <= -1: H(m) = 22/15 + 8 / (15 |4m+1| pi) < ratio  <=>  |4m+1| > 8 / (15 pi (ratio - 22/15))
    bound = 8.0 / (15.0 * math.pi * (ratio - LIMIT_RATIO))
    m = min(-2, -int(math.ceil((bound + 1.0) / 4.0)))
    while m + 1 <= -1 and ratio > hopf_threshold(m + 1):
        m += 1
    while not ratio > hopf_threshold(m):
        m -= 1
    return m


def classify_sequence(B: float, C: float, tol: Optional[float] = None) -> SequenceClassification:
    tol = default_tol() if tol is None else tol
    if B == 0:
        if C < -tol:
            return SequenceClassification(SequenceCase.ALL_SUPER)
        if C > tol:
            return SequenceClassification(SequenceCase.ALL_SUB)
        return SequenceClassification(SequenceCase.DEGENERATE)

    b2 = B ** 2
    ratio = C / b2
    if C - H_MIN * b2 < -tol:
        return SequenceClassification(SequenceCase.ALL_SUPER, ratio=ratio)
    if abs(C - H_MIN * b2) <= tol:
        return SequenceClassification(SequenceCase.ALL_SUPER, ratio=ratio, degenerate_k=(0,))
    if abs(C - LIMIT_RATIO * b2) <= tol:
        return SequenceClassification(SequenceCase.BOUNDARY, ratio=ratio)
    if C < LIMIT_RATIO * b2:
        return SequenceClassification(SequenceCase.SWITCH_NONNEG, n=_last_nonneg_below(ratio), ratio=ratio)
    if abs(C - H_MAX * b2) <= tol:
        return SequenceClassification(SequenceCase.ALL_SUB, ratio=ratio, degenerate_k=(-1,))
    if C < H_MAX * b2:
        return SequenceClassification(SequenceCase.SWITCH_NEG, n=_last_negative_below(ratio), ratio=ratio)
    return SequenceClassification(SequenceCase.ALL_SUB, ratio=ratio)


@dataclass
class SchwarzianReport:
    samples: List[Tuple[float, float]]
    excluded: List[float]
    all_negative: bool
    sf0: float
    sequence: SequenceClassification
    consistent: bool
    zero_curvature_checks: List[Tuple[int, Direction, bool]] = field(default_factory=list)


def schwarzian_guard(f: Nonlinearity, grid: Iterable[float], k_sample: Iterable[int] = range(-3, 4)) -> SchwarzianReport:
    """
    Если Sf < 0 на сетке, все бифуркации обязаны быть суперкритическими.
    При f''(0) = 0 направление совпадает со знаком Sf(0) = 6C.
    """
    f.require_classifiable()
    samples, excluded = [], []
    for xi in grid:
        try:
            samples.append((float(xi), schwarzian(f, float(xi))))
        except CriticalPointError:
            logger.warning('%s: критическая точка f в xi=%g исключена из сетки', f.name, xi)
            excluded.append(float(xi))

    sequence = classify_sequence(f.B, f.C)
    all_negative = bool(samples) and all(value < 0 for _, value in samples)
    sf0 = schwarzian(f, 0.0)
    consistent = True
    if all_negative:
        consistent = sequence.case == SequenceCase.ALL_SUPER

    checks = []
    if f.B == 0:
        for k in k_sample:
            direction = classify(f.B, f.C, k)
            expected = (Direction.SUPERCRITICAL if sf0 < 0
                        else Direction.SUBCRITICAL if sf0 > 0 else Direction.DEGENERATE)
            checks.append((k, direction, direction == expected))
        consistent = consistent and all(ok for _, _, ok in checks)

    logger.info('%s: Sf<0 на сетке=%s, случай %s, согласовано=%s',
                f.name, all_negative, sequence.case.value, consistent)
    return SchwarzianReport(samples=samples, excluded=excluded, all_negative=all_negative, sf0=sf0,
                            sequence=sequence, consistent=consistent, zero_curvature_checks=checks)

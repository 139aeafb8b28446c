"""
Нелинейность f уравнения x'(t) = -mu f(x(t-1)).

Хранится f'(0) = d1 как есть, а B и C нормированы:
B = f''(0) / (2 f'(0)), C = f'''(0) / (6 f'(0)).
Классификация работает с уравнением для g = f / d1 и параметром mu * d1.

Вычислитель должен принимать numpy-массивы: интегратор вызывает его
сразу на целом отрезке запаздывания.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .exceptions import (CriticalPointError, DegenerateLinearizationError, InconsistentDerivativesError,
                         NegativeSlopeError, NonlinearityError, UnknownPresetError)

logger = logging.getLogger(__name__)

CLOSED_FORM = 'closed-form'
FINITE_DIFFERENCE = 'finite-difference'

# шаблон разностей: 5 точек, h = 1e-3, один шаг Ричардсона
FD_STEP = 1e-3
_RICHARDSON_ORDERS = np.array([4, 4, 2])

ZERO_TOL = 1e-12
CONSISTENCY_TOL = 1e-6
DEGENERATE_SLOPE = 1e-8
CRITICAL_SLOPE = 1e-10

PRESETS = ('wright', 'ikeda', 'poly-switch', 'poly-subcritical', 'cubic')

Derivatives = Tuple[float, float, float]


def _central_stencil(evaluator, xi, h):
    fm2, fm1, f0, fp1, fp2 = (float(evaluator(xi + j * h)) for j in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h ** 2)
    d3 = (-fm2 + 2.0 * fm1 - 2.0 * fp1 + fp2) / (2.0 * h ** 3)
    return np.array([d1, d2, d3])


def finite_difference_derivatives(evaluator, xi=0.0, h=FD_STEP) -> Derivatives:
    """f', f'', f''' в точке xi по центральным разностям с экстраполяцией Ричардсона"""
    coarse = _central_stencil(evaluator, xi, h)
    fine = _central_stencil(evaluator, xi, h / 2.0)
    weight = 2.0 ** _RICHARDSON_ORDERS
    d1, d2, d3 = (weight * fine - coarse) / (weight - 1.0)
    return float(d1), float(d2), float(d3)


def taylor_from_samples(evaluator: Callable) -> Tuple[float, float, float]:
    """
    Оценивает (d1, B, C) по значениям вычислителя около нуля.
    B и C уже поделены на d1.
    """
    d1, d2, d3 = finite_difference_derivatives(evaluator, 0.0)
    if abs(d1) < DEGENERATE_SLOPE:
        raise DegenerateLinearizationError(d1)
    return d1, d2 / (2.0 * d1), d3 / (6.0 * d1)


@dataclass(frozen=True)
class Nonlinearity:
    """
    Нелинейность с нулём в нуле и нормированными коэффициентами Тейлора
    """
    evaluator: Callable = field(repr=False)
    d1_at_0: float
    B: float
    C: float
    derivative_source: str = CLOSED_FORM
    name: str = 'custom'
    closed_derivatives: Optional[Callable] = field(default=None, repr=False, compare=False)
    descriptor: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        if self.derivative_source not in (CLOSED_FORM, FINITE_DIFFERENCE):
            raise NonlinearityError(f'Неизвестный источник производных: {self.derivative_source!r}')
        if self.derivative_source == CLOSED_FORM and self.closed_derivatives is None:
            raise NonlinearityError('Для closed-form нужны явные производные')
        if self.d1_at_0 == 0:
            raise DegenerateLinearizationError(self.d1_at_0)
        value = float(self.evaluator(0.0))
        if abs(value) > ZERO_TOL:
            raise NonlinearityError(f'f(0) = {value:.3e}, а должно быть 0')
        if self.derivative_source == CLOSED_FORM:
            self._check_closed_form()

    def _check_closed_form(self):
        d1, B, C = taylor_from_samples(self.evaluator)
        for label, stored, sampled in (('d1', self.d1_at_0, d1), ('B', self.B, B), ('C', self.C, C)):
            if abs(stored - sampled) > CONSISTENCY_TOL * max(1.0, abs(stored)):
                raise InconsistentDerivativesError(
                    f'{self.name}: {label} = {stored}, а по разностям {sampled}')

    def __call__(self, xi):
        return self.evaluator(xi)

    def derivatives(self, xi: float) -> Derivatives:
        if self.derivative_source == CLOSED_FORM:
            d1, d2, d3 = self.closed_derivatives(xi)
            return float(d1), float(d2), float(d3)
        return finite_difference_derivatives(self.evaluator, xi)

    def require_classifiable(self):
        if self.d1_at_0 < 0:
            raise NegativeSlopeError(self.d1_at_0)
        return self

    def original_mu(self, mu_normalized: float) -> float:
        """Параметр исходного уравнения, соответствующий mu нормированного"""
        return mu_normalized / self.d1_at_0

    def scaled(self, a: float) -> 'Nonlinearity':
        """a*f: d1 умножается на a, нормированные B и C не меняются"""
        if a <= 0:
            raise NonlinearityError('Множитель должен быть положительным')
        evaluator = self.evaluator
        derivatives = self.closed_derivatives

        def scaled_evaluator(xi):
            return a * evaluator(xi)

        scaled_derivatives = None
        if derivatives is not None:
            def scaled_derivatives(xi):
                return tuple(a * d for d in derivatives(xi))

        return replace(self, evaluator=scaled_evaluator, d1_at_0=a * self.d1_at_0,
                       closed_derivatives=scaled_derivatives, name=f'{a}*{self.name}', descriptor=None)


def _exp_derivatives(xi):
    e = np.exp(xi)
    return e, e, e


def _sin_derivatives(xi):
    return np.cos(xi), -np.sin(xi), -np.cos(xi)


def from_cubic(d1: float, f2: float, f3: float, name: Optional[str] = None) -> Nonlinearity:
    """f(xi) = d1 xi + f2/2 xi^2 + f3/6 xi^3, коэффициенты заданы производными в нуле"""
    if d1 == 0:
        raise DegenerateLinearizationError(d1)
    a2 = f2 / 2.0
    a3 = f3 / 6.0

    def evaluator(xi):
        return xi * (d1 + xi * (a2 + xi * a3))

    def derivatives(xi):
        return d1 + xi * (2.0 * a2 + 3.0 * a3 * xi), 2.0 * a2 + 6.0 * a3 * xi, 6.0 * a3

    return Nonlinearity(evaluator=evaluator, d1_at_0=float(d1), B=a2 / d1, C=a3 / d1,
                        name=name or f'cubic({d1}, {f2}, {f3})', closed_derivatives=derivatives,
                        descriptor={'cubic': [float(d1), float(f2), float(f3)]})


def _cubic_preset(B, C, name):
    f = from_cubic(1.0, 2.0 * B, 6.0 * C, name=name)
    return replace(f, descriptor={'preset': name} if name in PRESETS else {'preset': 'cubic', 'B': B, 'C': C})


_CUBIC_PATTERN = re.compile(r'^cubic\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)$')


def make_builtin(name: str, B: Optional[float] = None, C: Optional[float] = None) -> Nonlinearity:
    """
    Встроенные нелинейности: wright, ikeda, poly-switch, poly-subcritical
    и cubic(B, C) (строкой или через аргументы B, C)
    """
    match = _CUBIC_PATTERN.match(name.strip())
    if match:
        name, B, C = 'cubic', float(match.group(1)), float(match.group(2))
    if name == 'wright':
        return Nonlinearity(evaluator=np.expm1, d1_at_0=1.0, B=0.5, C=1.0 / 6.0, name=name,
                            closed_derivatives=_exp_derivatives, descriptor={'preset': name})
    if name == 'ikeda':
        return Nonlinearity(evaluator=np.sin, d1_at_0=1.0, B=0.0, C=-1.0 / 6.0, name=name,
                            closed_derivatives=_sin_derivatives, descriptor={'preset': name})
    if name == 'poly-switch':
        return _cubic_preset(1.0, 1.44, name)
    if name == 'poly-subcritical':
        return _cubic_preset(1.0, 22.0 / 15.0, name)
    if name == 'cubic':
        if B is None or C is None:
            raise UnknownPresetError('cubic без коэффициентов B, C')
        return _cubic_preset(float(B), float(C), f'cubic({B}, {C})')
    raise UnknownPresetError(name)


def from_evaluator(evaluator: Callable, name: str = 'custom') -> Nonlinearity:
    """Пользовательская f без явных производных: всё берётся из разностей"""
    d1, B, C = taylor_from_samples(evaluator)
    return Nonlinearity(evaluator=evaluator, d1_at_0=d1, B=B, C=C,
                        derivative_source=FINITE_DIFFERENCE, name=name)


def from_descriptor(descriptor: dict) -> Nonlinearity:
    """Восстанавливает нелинейность по сериализуемому описанию (для задач Celery)"""
    if 'cubic' in descriptor:
        d1, f2, f3 = descriptor['cubic']
        return from_cubic(d1, f2, f3)
    if 'preset' in descriptor:
        return make_builtin(descriptor['preset'], descriptor.get('B'), descriptor.get('C'))
    raise UnknownPresetError(str(descriptor))


def schwarzian(f: Nonlinearity, xi: float) -> float:
    """(Sf)(xi) = f'''/f' - 3/2 (f''/f')^2"""
    d1, d2, d3 = f.derivatives(xi)
    if abs(d1) < CRITICAL_SLOPE:
        raise CriticalPointError(xi, d1)
    return d3 / d1 - 1.5 * (d2 / d1) ** 2

"""
Характеристическое уравнение lambda = -mu exp(-lambda) линеаризации x'(t) = -mu x(t-1).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import newton

from .exceptions import ConvergenceError

logger = logging.getLogger(__name__)

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class CharRoot:
    alpha: float
    omega: float
    mu: float
    residual: float

    @property
    def value(self) -> complex:
        return complex(self.alpha, self.omega)


def characteristic(lam: complex, mu: float) -> complex:
    return lam + mu * np.exp(-lam)


def critical_value(k: int) -> float:
    """mu_k = omega_k = (4k+1) pi / 2"""
    return (4 * k + 1) * math.pi / 2.0


def critical_root(k: int) -> CharRoot:
    omega = critical_value(k)
    residual = abs(characteristic(complex(0.0, omega), omega))
    return CharRoot(alpha=0.0, omega=omega, mu=omega, residual=float(residual))


def refine_root(mu: float, guess: complex, tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> CharRoot:
    """Ньютон для h(lambda) = lambda + mu exp(-lambda), h' = 1 - mu exp(-lambda)"""
    lam, result = newton(characteristic, complex(guess), fprime=lambda z, m: 1.0 - m * np.exp(-z), args=(mu,),
                         tol=tol, maxiter=max_iter, full_output=True, disp=False)
    lam = complex(lam)
    residual = abs(characteristic(lam, mu))
    if not np.isfinite(residual):
        raise ConvergenceError('Итерации Ньютона ушли на бесконечность', lam, residual)
    if not result.converged or residual > tol:
        raise ConvergenceError(f'Корень при mu={mu} не найден за {max_iter} итераций: {result.flag}', lam, residual)
    return CharRoot(alpha=float(lam.real), omega=float(lam.imag), mu=float(mu), residual=float(residual))


def continue_root(root: CharRoot, mu_to: float, increments: int = 10) -> CharRoot:
    """
    Продолжение корня по параметру: mu меняется равными шагами,
    предыдущий корень служит начальным приближением
    """
    current = root
    for mu in np.linspace(root.mu, mu_to, increments + 1)[1:]:
        current = refine_root(float(mu), current.value)
    return current


def crossing_speed_exact(k: int) -> float:
    mu_k = critical_value(k)
    return mu_k / (1.0 + mu_k ** 2)


def crossing_speed_numeric(k: int, h: float = 1e-4) -> float:
    """Центральная разность d alpha / d mu в mu_k вдоль ветви критического корня"""
    if not 0 < h <= 1e-2:
        raise ValueError(f'Шаг h={h} вне (0, 1e-2]')
    start = critical_root(k)
    right = continue_root(start, start.mu + h)
    left = continue_root(start, start.mu - h)
    speed = (right.alpha - left.alpha) / (2.0 * h)
    logger.debug('k=%d: d alpha/d mu = %.12g', k, speed)
    return speed


def nearest_index(mu: float) -> int:
    """Индекс k с ближайшим к mu критическим значением"""
    return int(round((2.0 * mu / math.pi - 1.0) / 4.0))


def leading_root(mu: float, increments: int = 50) -> CharRoot:
    """Корень, продолженный от критического корня ближайшего mu_k"""
    k = nearest_index(mu)
    return continue_root(critical_root(k), mu, increments)

"""
Преобразование Кука C_l: (mu*, T, p(t)) -> (mu* (lT+1), T / (lT+1), p((lT+1) t)).

Переводит k-ю ветвь периодических решений в (k+l)-ю.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .dde_sim import MIN_STEPS_PER_DELAY, SAMPLES_PER_PERIOD, PeriodicOrbit
from .exceptions import InsufficientCoverageError
from .nonlinearity import Nonlinearity
from .period_bounds import linear_period
from .spectral import critical_value

logger = logging.getLogger(__name__)

BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class CookeImage:
    mu_out: float
    T_out: float
    l: int
    time_rescale: float


def cooke_map(mu_star: float, T: float, l: int) -> CookeImage:
    if not mu_star > 0:
        raise ValueError(f'mu*={mu_star} должно быть положительным')
    if not T > 0:
        raise ValueError(f'T={T} должно быть положительным')
    if int(l) != l or l < 0:
        raise ValueError(f'l={l} должно быть целым неотрицательным')
    factor = l * T + 1.0
    return CookeImage(mu_out=mu_star * factor, T_out=T / factor, l=int(l), time_rescale=factor)


def branch_map_check(k: int, l: int) -> bool:
    """C_l(mu_k, T_0^k) совпадает с (mu_{k+l}, T_0^{k+l})"""
    image = cooke_map(critical_value(k), linear_period(k), l)
    target_mu = critical_value(k + l)
    target_T = linear_period(k + l)
    return (abs(image.mu_out - target_mu) <= BRANCH_TOL * max(1.0, target_mu)
            and abs(image.T_out - target_T) <= BRANCH_TOL * max(1.0, target_T))


def cooke_residual(orbit: PeriodicOrbit, l: int, f: Nonlinearity) -> float:
    """
    max |q'(t) + mu_out f(q(t-1))| для q(t) = p(s t), s = lT+1,
    по 512 точкам на преобразованный период; p и p' берутся из сплайна орбиты
    """
    if l < 1:
        raise ValueError(f'l={l} должно быть положительным')
    traj = orbit.trajectory
    if traj.step > 1.0 / MIN_STEPS_PER_DELAY:
        raise InsufficientCoverageError(f'Шаг {traj.step} слишком крупный для плотного вывода')
    image = cooke_map(orbit.mu, orbit.period, l)
    s = image.time_rescale
    needed = orbit.period + s
    if traj.t1 - traj.start < needed:
        raise InsufficientCoverageError(
            f'Орбита покрывает {traj.t1 - traj.start:.6g}, нужно {needed:.6g} (период плюс запаздывание)')

    # t in [1, 1 + T_out]: q(t - 1) = p(start + s (t - 1)) не выходит за начало траектории
    t = 1.0 + np.linspace(0.0, image.T_out, SAMPLES_PER_PERIOD, endpoint=False)
    u = traj.start + s * t
    q_prime = s * traj.derivative(u)
    q_delayed = traj(u - s)
    residual = float(np.max(np.abs(q_prime + image.mu_out * f(q_delayed))))
    logger.debug('l=%d: mu_out=%.10g, T_out=%.10g, невязка %.3e', l, image.mu_out, image.T_out, residual)
    return residual

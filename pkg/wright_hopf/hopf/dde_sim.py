"""
Численное решение x'(t) = -mu f(x(t-1)) методом шагов.

Шаг h = 1/m, поэтому x(t-1) всегда попадает на уже готовый отрезок
[t-1, t]. Правая часть не зависит от x(t), так что на целом единичном
отрезке стадии RK4 считаются сразу векторно: k1 и k4 берутся в узлах
предыдущего отрезка, k2 = k3 в серединах ячеек по кубическому Эрмиту.
Производная в узлах берётся из самого уравнения.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np
from django.conf import settings
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq
from scipy.stats import linregress

from .bifurcation import Direction, classify
from .exceptions import (BoundDomainError, BracketError, DivergenceError, InsufficientCoverageError,
                         NoOscillationError, NonConvergenceError)
from .nonlinearity import Nonlinearity
from .spectral import critical_value

logger = logging.getLogger(__name__)

MIN_STEPS_PER_DELAY = 20
CROSSING_THRESHOLD = 1e-12
MIN_CROSSINGS = 7
MEASURED_CYCLES = 5
PERIOD_TOL = 1e-5
AMPLITUDE_DRIFT_TOL = 1e-4
SAMPLES_PER_PERIOD = 512
DECAY_FACTOR = 1e-3
BISECTION_WIDTH = 1e-4


def steps_per_delay(step: float) -> int:
    m = int(round(1.0 / step))
    if m < MIN_STEPS_PER_DELAY or abs(m * step - 1.0) > 1e-12:
        raise ValueError(f'Шаг {step} должен быть 1/m с целым m >= {MIN_STEPS_PER_DELAY}')
    return m


# --- начальные функции на [-1, 0] ---

class History:
    """Начальная функция на [-1, 0]; sample(m) даёт значения и производные в узлах -1 + j/m"""

    def sample(self, m: int) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantHistory(History):
    amplitude: float

    def sample(self, m):
        return np.full(m + 1, float(self.amplitude)), np.zeros(m + 1)


@dataclass(frozen=True)
class FunctionHistory(History):
    value: Callable
    slope: Optional[Callable] = None

    def sample(self, m):
        s = np.linspace(-1.0, 0.0, m + 1)
        x = np.asarray([self.value(v) for v in s], dtype=float)
        if self.slope is not None:
            dx = np.asarray([self.slope(v) for v in s], dtype=float)
        else:
            dx = np.gradient(x, 1.0 / m, edge_order=2)
        return x, dx


@dataclass(frozen=True)
class SampledHistory(History):
    x: np.ndarray
    dx: np.ndarray

    def sample(self, m):
        if len(self.x) != m + 1:
            raise ValueError(f'История задана в {len(self.x)} узлах, а нужно {m + 1}')
        return np.asarray(self.x, dtype=float), np.asarray(self.dx, dtype=float)


def as_history(history: Union[History, float, Callable]) -> History:
    if isinstance(history, History):
        return history
    if callable(history):
        return FunctionHistory(history)
    return ConstantHistory(float(history))


# --- траектория с плотным выводом ---

class Trajectory:
    """
    Узлы (t, x, x') и кубический эрмитов сплайн по ним.
    Если задан history_end_slope, узел t0 разделяет начальную функцию и решение:
    слева в нём используется производная начальной функции.
    """

    def __init__(self, times, x, dx, t0: float, step: float, history_end_slope: Optional[float] = None):
        self.times = np.asarray(times, dtype=float)
        self.x = np.asarray(x, dtype=float)
        self.dx = np.asarray(dx, dtype=float)
        self.t0 = float(t0)
        self.step = float(step)
        self.history_end_slope = history_end_slope
        if len(self.times) < 2 or np.any(np.diff(self.times) <= 0):
            raise ValueError('Узлы траектории должны строго возрастать')
        self._split = int(np.searchsorted(self.times, self.t0 - 1e-12 * max(1.0, abs(self.t0))))

    @classmethod
    def from_samples(cls, t, x, dx) -> 'Trajectory':
        t = np.asarray(t, dtype=float)
        return cls(t, x, dx, t0=t[0], step=float(np.max(np.diff(t))))

    @property
    def start(self) -> float:
        return float(self.times[0])

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    @cached_property
    def _splines(self):
        if self.history_end_slope is None or self._split == 0:
            return None, CubicHermiteSpline(self.times, self.x, self.dx)
        j = self._split
        hist_dx = self.dx[:j + 1].copy()
        hist_dx[-1] = self.history_end_slope
        history = CubicHermiteSpline(self.times[:j + 1], self.x[:j + 1], hist_dx)
        return history, CubicHermiteSpline(self.times[j:], self.x[j:], self.dx[j:])

    def _check_range(self, t):
        slack = 1e-9 * max(1.0, abs(self.t1))
        if np.min(t) < self.start - slack or np.max(t) > self.t1 + slack:
            raise InsufficientCoverageError(
                f'Запрос [{np.min(t):.6g}, {np.max(t):.6g}] вне траектории [{self.start:.6g}, {self.t1:.6g}]')

    def _evaluate(self, t, nu):
        t = np.asarray(t, dtype=float)
        self._check_range(t)
        history, main = self._splines
        if history is None:
            return main(t, nu)
        return np.where(t < self.t0, history(t, nu), main(t, nu))

    def __call__(self, t):
        return self._evaluate(t, 0)

    def derivative(self, t):
        return self._evaluate(t, 1)

    def window(self, t_from: float) -> 'Trajectory':
        """Хвост траектории с t0 = t_from (выровнено по узлу) и отрезком запаздывания перед ним"""
        j = int(np.searchsorted(self.times, t_from - 1e-9))
        lo = int(np.searchsorted(self.times, self.times[j] - 1.0 - 1e-9))
        if lo < self._split:
            lo = 0
        return Trajectory(self.times[lo:], self.x[lo:], self.dx[lo:], t0=self.times[j], step=self.step,
                          history_end_slope=self.history_end_slope if lo < self._split else None)

    def as_history(self) -> SampledHistory:
        """Последний единичный отрезок как начальная функция для продолжения счёта"""
        m = steps_per_delay(self.step)
        return SampledHistory(self.x[-(m + 1):].copy(), self.dx[-(m + 1):].copy())


def _march(f: Nonlinearity, mu: float, history: History, t_end: float, step: float):
    """
    Генератор метода шагов: после каждого единичного отрезка отдаёт
    (число готовых шагов, times, xs, ds, history_end_slope).
    Индекс j массивов соответствует t = (j - m) h.
    """
    m = steps_per_delay(step)
    n_steps = int(math.ceil(t_end / step - 1e-9))
    xs = np.empty(m + n_steps + 1)
    ds = np.empty(m + n_steps + 1)
    xs[:m + 1], ds[:m + 1] = history.sample(m)
    history_end_slope = float(ds[m])
    times = (np.arange(m + n_steps + 1) - m) * step
    with np.errstate(over='ignore', invalid='ignore'):
        ds[m] = -mu * f(xs[0])
        done = 0
        while done < n_steps:
            i0, i1 = done, min(done + m, n_steps)
            left = xs[i0:i1]
            right = xs[i0 + 1:i1 + 1]
            d_left = ds[i0:i1]
            d_right = ds[i0 + 1:i1 + 1].copy()
            if i0 == 0 and i1 == m:
                d_right[-1] = history_end_slope
            mid = 0.5 * (left + right) + step * (d_left - d_right) / 8.0
            k1 = -mu * f(left)
            k23 = -mu * f(mid)
            k4 = -mu * f(right)
            xs[i0 + m + 1:i1 + m + 1] = xs[i0 + m] + np.cumsum(step / 6.0 * (k1 + 4.0 * k23 + k4))
            ds[i0 + m + 1:i1 + m + 1] = k4
            block = xs[i0 + m + 1:i1 + m + 1]
            if not np.all(np.isfinite(block)):
                bad = int(np.argmax(~np.isfinite(block)))
                raise DivergenceError(float(times[i0 + m + 1 + bad]))
            done = i1
            yield done, times, xs, ds, history_end_slope


def _trajectory(times, xs, ds, done, m, step, history_end_slope) -> Trajectory:
    end = m + done + 1
    return Trajectory(times[:end], xs[:end], ds[:end], t0=0.0, step=step, history_end_slope=history_end_slope)


def integrate(f: Nonlinearity, mu: float, history=0.0, t_end: Optional[float] = None,
              step: Optional[float] = None) -> Trajectory:
    """Решение на [0, t_end] с начальной функцией на [-1, 0] (число, функция или History)"""
    t_end = settings.HOPF_DEFAULT_T_END if t_end is None else t_end
    step = settings.HOPF_DEFAULT_STEP if step is None else step
    if not t_end > 0:
        raise ValueError(f't_end={t_end} должно быть положительным')
    m = steps_per_delay(step)
    state = None
    for state in _march(f, mu, as_history(history), t_end, step):
        pass
    done, times, xs, ds, slope = state
    return _trajectory(times, xs, ds, done, m, step, slope)


# --- измерение периода ---

@dataclass
class PeriodMeasurement:
    period: float
    amplitude: float
    convergence: float
    crossings: np.ndarray
    cycle_amplitudes: np.ndarray
    amplitude_drift: float

    def __iter__(self):
        return iter((self.period, self.amplitude, self.convergence))


def upward_crossings(traj: Trajectory, t_from: float, t_to: Optional[float] = None) -> np.ndarray:
    """Моменты перехода x через ноль снизу вверх, уточнённые по сплайну"""
    t_to = traj.t1 if t_to is None else t_to
    lo = int(np.searchsorted(traj.times, t_from))
    hi = int(np.searchsorted(traj.times, t_to, side='right'))
    x = traj.x[lo:hi]
    idx = np.nonzero((x[:-1] < 0) & (x[1:] >= 0))[0] + lo
    roots = []
    for i in idx:
        a, b = traj.times[i], traj.times[i + 1]
        if traj.x[i + 1] == 0:
            roots.append(float(b))
        else:
            roots.append(brentq(lambda t: float(traj(t)), a, b, xtol=1e-14))
    return np.asarray(roots)


def _cycle_amplitudes(traj: Trajectory, crossings: np.ndarray) -> np.ndarray:
    amplitudes = []
    for a, b in zip(crossings[:-1], crossings[1:]):
        grid = np.linspace(a, b, SAMPLES_PER_PERIOD + 1)
        amplitudes.append(float(np.max(np.abs(traj(grid)))))
    return np.asarray(amplitudes)


def _relative_spread(values: np.ndarray) -> float:
    mean = float(np.mean(values))
    return float(np.max(np.abs(values - mean)) / abs(mean))


def measure_period(traj: Trajectory, tail: Optional[float] = None) -> PeriodMeasurement:
    """
    Период как среднее расстояние между последними пятью восходящими нулями,
    амплитуда как max|x| за последний полный период
    """
    tail = settings.HOPF_TAIL_WINDOW if tail is None else tail
    t_from = max(traj.t0, traj.t1 - tail)
    window = traj.x[int(np.searchsorted(traj.times, t_from)):]
    if window.size == 0 or float(np.max(np.abs(window))) < CROSSING_THRESHOLD:
        raise NoOscillationError(f'Амплитуда на [{t_from:.6g}, {traj.t1:.6g}] ниже {CROSSING_THRESHOLD}')
    crossings = upward_crossings(traj, t_from)
    if len(crossings) < MIN_CROSSINGS:
        raise NoOscillationError(f'Найдено {len(crossings)} восходящих нулей, нужно не меньше {MIN_CROSSINGS}')
    last = crossings[-(MEASURED_CYCLES + 1):]
    spacings = np.diff(last)
    amplitudes = _cycle_amplitudes(traj, last)
    return PeriodMeasurement(period=float(np.mean(spacings)), amplitude=float(amplitudes[-1]),
                             convergence=_relative_spread(spacings), crossings=crossings,
                             cycle_amplitudes=amplitudes, amplitude_drift=_relative_spread(amplitudes))


# --- периодические решения ---

@dataclass
class PeriodicOrbit:
    mu: float
    period: float
    amplitude: float
    trajectory: Trajectory = field(repr=False)
    convergence: float
    amplitude_drift: float = 0.0
    elapsed: float = 0.0


def find_periodic_orbit(f: Nonlinearity, mu: float, initial_amplitude: float = 0.1,
                        step: Optional[float] = None, tail: Optional[float] = None,
                        horizon_cap: Optional[float] = None) -> PeriodicOrbit:
    """
    Устойчивый цикл прямым интегрированием: горизонт удваивается, счёт продолжается
    с последнего отрезка, пока период не стабилизируется (не дальше horizon_cap)
    """
    step = settings.HOPF_DEFAULT_STEP if step is None else step
    tail = settings.HOPF_TAIL_WINDOW if tail is None else tail
    cap = settings.HOPF_HORIZON_CAP if horizon_cap is None else horizon_cap
    history = as_history(initial_amplitude)
    horizon = min(float(settings.HOPF_DEFAULT_T_END), cap)
    elapsed = 0.0
    while True:
        traj = integrate(f, mu, history, horizon, step)
        elapsed += horizon
        try:
            measurement = measure_period(traj, tail)
        except NoOscillationError:
            if elapsed >= cap or float(np.max(np.abs(traj.x[-traj.times.size // 4:]))) < CROSSING_THRESHOLD:
                raise
            measurement = None
        if measurement is not None:
            logger.debug('%s mu=%.6g t=%.0f: T=%.10g, разброс %.2e, дрейф амплитуды %.2e',
                         f.name, mu, elapsed, measurement.period, measurement.convergence,
                         measurement.amplitude_drift)
            if measurement.convergence <= PERIOD_TOL and measurement.amplitude_drift <= AMPLITUDE_DRIFT_TOL:
                return PeriodicOrbit(mu=mu, period=measurement.period, amplitude=measurement.amplitude,
                                     trajectory=traj.window(traj.t1 - tail), convergence=measurement.convergence,
                                     amplitude_drift=measurement.amplitude_drift, elapsed=elapsed)
        if elapsed >= cap:
            raise NonConvergenceError(f'{f.name} mu={mu}: цикл не установился за t={elapsed:.0f}')
        history = traj.as_history()
        horizon = min(2.0 * horizon, cap - elapsed)


def equation_residual(orbit: PeriodicOrbit, f: Nonlinearity) -> float:
    """max |p'(t) + mu f(p(t-1))| по 512 точкам на период"""
    traj = orbit.trajectory
    lo = max(traj.t0, traj.start + 1.0)
    count = max(2, int(math.ceil((traj.t1 - lo) / orbit.period * SAMPLES_PER_PERIOD)))
    t = np.linspace(lo, traj.t1, count)
    return float(np.max(np.abs(traj.derivative(t) + orbit.mu * f(traj(t - 1.0)))))


# --- неустойчивые циклы: бисекция по границе области притяжения ---

DECAY = 'decay'
ESCAPE = 'escape'


def _fate(f: Nonlinearity, mu: float, amplitude: float, step: float, cap: float, keep: bool = False):
    """Исход для постоянной начальной функции: затухание или уход на бесконечность"""
    if amplitude == 0:
        return DECAY, None
    escape_level = settings.HOPF_ESCAPE_LEVEL
    m = steps_per_delay(step)
    state = None
    try:
        for state in _march(f, mu, ConstantHistory(amplitude), cap, step):
            done, times, xs, ds, slope = state
            last = np.abs(xs[done:done + m + 1])
            if np.max(last) > escape_level:
                return ESCAPE, None
            if done * step >= 10.0 and np.max(last) < DECAY_FACTOR * abs(amplitude):
                return DECAY, _trajectory(times, xs, ds, done, m, step, slope) if keep else None
    except DivergenceError:
        return ESCAPE, None
    raise NonConvergenceError(f'{f.name} mu={mu}: амплитуда {amplitude} не решилась за t={cap:.0f}')


def _shadow_period(traj: Trajectory) -> float:
    """Средний период на пяти циклах, где амплитуда меняется меньше всего"""
    crossings = upward_crossings(traj, traj.t0)
    if len(crossings) < MIN_CROSSINGS:
        raise NoOscillationError(f'Переходный процесс дал {len(crossings)} восходящих нулей')
    amplitudes = _cycle_amplitudes(traj, crossings)
    change = np.abs(np.diff(np.log(amplitudes)))
    windows = np.convolve(change, np.ones(MEASURED_CYCLES - 1), mode='valid')
    best = int(np.argmin(windows))
    return float(np.mean(np.diff(crossings[best:best + MEASURED_CYCLES + 1])))


@dataclass
class ThresholdResult:
    mu: float
    amplitude_threshold: float
    period_estimate: float
    low: float
    high: float


def unstable_orbit_threshold(f: Nonlinearity, mu: float, bracket: Tuple[float, float] = (0.0, 1.0),
                             step: Optional[float] = None, horizon_cap: Optional[float] = None,
                             rel_width: float = BISECTION_WIDTH) -> ThresholdResult:
    """
    Порог амплитуды постоянной начальной функции между затуханием и уходом;
    период неустойчивого цикла по переходному процессу, стартующему внутри порога
    """
    step = settings.HOPF_DEFAULT_STEP if step is None else step
    cap = settings.HOPF_HORIZON_CAP if horizon_cap is None else horizon_cap
    low, high = map(float, bracket)
    if not 0 <= low < high:
        raise BracketError(f'Некорректная скобка {bracket}')
    if _fate(f, mu, low, step, cap)[0] != DECAY or _fate(f, mu, high, step, cap)[0] != ESCAPE:
        raise BracketError(f'{f.name} mu={mu}: скобка {bracket} не разделяет затухание и уход')
    while high - low > rel_width * high:
        middle = 0.5 * (low + high)
        if _fate(f, mu, middle, step, cap)[0] == DECAY:
            low = middle
        else:
            high = middle
        logger.debug('%s mu=%.6g: порог в [%.8g, %.8g]', f.name, mu, low, high)
    outcome, transient = _fate(f, mu, low, step, cap, keep=True)
    if transient is None:
        raise NoOscillationError(f'{f.name} mu={mu}: переходный процесс не сохранён')
    period = _shadow_period(transient)
    logger.info('%s mu=%.6g: порог %.6g, период %.8g', f.name, mu, 0.5 * (low + high), period)
    return ThresholdResult(mu=mu, amplitude_threshold=0.5 * (low + high), period_estimate=period,
                           low=low, high=high)


# --- развёртки по eta ---

@dataclass
class SweepRow:
    eta: float
    mu: float
    amplitude: float
    period: float

    def as_dict(self) -> dict:
        return {'eta': self.eta, 'mu': self.mu, 'amplitude': self.amplitude, 'period': self.period}


@dataclass
class SweepTable:
    direction: Direction
    rows: List[SweepRow]
    slope: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: Optional[float] = None


def sweep_cell(f: Nonlinearity, eta: float, direction: Direction, k: int = 0,
               step: Optional[float] = None, bracket: Tuple[float, float] = (0.0, 1.0)) -> SweepRow:
    """Одна точка развёртки: устойчивый цикл справа от mu_0 или порог слева"""
    if k != 0:
        raise BoundDomainError('Развёртка доступна только для ветви k = 0')
    mu_k = critical_value(k)
    if direction == Direction.SUPERCRITICAL:
        mu = f.original_mu(mu_k + eta)
        orbit = find_periodic_orbit(f, mu, step=step)
        row = SweepRow(eta=eta, mu=mu, amplitude=orbit.amplitude, period=orbit.period)
    elif direction == Direction.SUBCRITICAL:
        mu = f.original_mu(mu_k - eta)
        result = unstable_orbit_threshold(f, mu, bracket=bracket, step=step)
        row = SweepRow(eta=eta, mu=mu, amplitude=result.amplitude_threshold, period=result.period_estimate)
    else:
        raise BoundDomainError('Вырожденная бифуркация: направление ветви неизвестно')
    logger.info('%s eta=%.4g: A=%.8g, T=%.10g', f.name, eta, row.amplitude, row.period)
    return row


def fit_square_root_law(rows: List[SweepRow]) -> Tuple[float, float, float]:
    """Линейная регрессия amplitude^2 по eta: (наклон, сдвиг, R^2)"""
    etas = np.array([row.eta for row in rows])
    squares = np.array([row.amplitude for row in rows]) ** 2
    fit = linregress(etas, squares)
    return float(fit.slope), float(fit.intercept), float(fit.rvalue ** 2)


def summarize_sweep(direction: Direction, rows: List[SweepRow]) -> SweepTable:
    """Строки по возрастанию eta; для суперкритической ветви ещё и регрессия amplitude^2 по eta"""
    rows = sorted(rows, key=lambda row: row.eta)
    table = SweepTable(direction=direction, rows=rows)
    if direction == Direction.SUPERCRITICAL and len(rows) >= 3:
        table.slope, table.intercept, table.r_squared = fit_square_root_law(rows)
    return table


def amplitude_sweep(f: Nonlinearity, eta_grid: Iterable[float], k: int = 0,
                    step: Optional[float] = None) -> SweepTable:
    """Последовательная развёртка; параллельный вариант через Celery в hopf.tasks"""
    f.require_classifiable()
    direction = classify(f.B, f.C, k)
    rows = [sweep_cell(f, float(eta), direction, k, step) for eta in sorted(eta_grid)]
    return summarize_sweep(direction, rows)


def linear_frequency(f: Nonlinearity, mu: float, amplitude: float = 1e-6, t_end: float = 80.0,
                     step: Optional[float] = None) -> float:
    """Угловая частота малых колебаний по расстоянию между нулями"""
    traj = integrate(f, mu, amplitude, t_end, step)
    measurement = measure_period(traj, tail=t_end / 2.0)
    return 2.0 * math.pi / measurement.period

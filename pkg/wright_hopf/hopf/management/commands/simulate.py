import logging

import numpy as np

from django.conf import settings
from django.core.management.base import CommandError

from hopf.bifurcation import classify
from hopf.dde_sim import integrate, measure_period
from hopf.exceptions import NoOscillationError
from hopf.spectral import critical_value

from ._base import EXIT_USAGE, HopfCommand

logger = logging.getLogger(__name__)


class Command(HopfCommand):
    help = 'Решение x\'(t) = -mu f(x(t-1)) с постоянной начальной функцией: CSV (t, x) или JSON-сводка'

    def add_run_arguments(self, parser):
        parser.add_argument('--mu', type=float)
        parser.add_argument('--amplitude', type=float, help='значение начальной функции на [-1, 0]')
        parser.add_argument('--t-end', type=float)
        parser.add_argument('--step', type=float, help='шаг 1/m, m >= 20')

    def run(self, serializer, options):
        data = serializer.validated_data
        if data.get('mu') is None:
            raise CommandError('Укажите --mu', returncode=EXIT_USAGE)
        f = serializer.nonlinearity()
        t_end = data.get('t_end') or settings.HOPF_DEFAULT_T_END
        traj = integrate(f, data['mu'], data['amplitude'], t_end, data.get('step'))
        solution = traj.times >= traj.t0
        rows = [{'t': float(t), 'x': float(x)} for t, x in zip(traj.times[solution], traj.x[solution])]

        # сверка с классификацией: по нормированному параметру mu d1 относительно mu_0
        mu_normalized = data['mu'] * f.d1_at_0
        summary = {'nonlinearity': f.name, 'mu': data['mu'], 'mu_normalized': mu_normalized,
                   'eta': mu_normalized - critical_value(0), 'amplitude0': data['amplitude'],
                   't_end': traj.t1, 'step': traj.step, 'x_end': float(traj.x[-1]),
                   'max_abs_tail': float(np.max(np.abs(traj.x[traj.times >= traj.t1 - 1.0]))),
                   'period': None, 'amplitude': None, 'convergence': None,
                   'direction_k0': None, 'zero_stable': mu_normalized < critical_value(0)}
        if f.d1_at_0 > 0:
            summary['direction_k0'] = classify(f.B, f.C, 0).value
        try:
            measurement = measure_period(traj)
            summary.update(period=measurement.period, amplitude=measurement.amplitude,
                           convergence=measurement.convergence)
        except NoOscillationError as error:
            logger.info('%s mu=%g: %s', f.name, data['mu'], error)
        return ['t', 'x'], rows, summary

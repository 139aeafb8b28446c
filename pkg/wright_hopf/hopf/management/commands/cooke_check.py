import logging

from hopf.cooke import branch_map_check, cooke_map, cooke_residual
from hopf.dde_sim import equation_residual, find_periodic_orbit
from hopf.period_bounds import linear_period
from hopf.serializers import CookeReportSerializer
from hopf.spectral import critical_value

from ._base import HopfCommand

logger = logging.getLogger(__name__)

COLUMNS = ['k', 'l', 'mu_out', 'T_out', 'branch_ok', 'orbit_residual', 'equation_residual']


class Command(HopfCommand):
    help = 'Таблица (k, l) для преобразования Кука и невязки преобразованной орбиты'
    default_preset = 'wright'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--k-max', type=int, default=20)
        parser.add_argument('--l-max', type=int, default=20)
        parser.add_argument('--residual-l-max', type=int, default=1,
                            help='невязки орбиты для l = 1..N (окно орбиты должно покрывать T + lT + 1)')

    def add_run_arguments(self, parser):
        parser.add_argument('--mu', type=float, help='посчитать устойчивую орбиту при этом mu и её невязки')
        parser.add_argument('--step', type=float, help='шаг 1/m, m >= 20')

    def run(self, serializer, options):
        data = serializer.validated_data
        if options['k_max'] < 0 or options['l_max'] < 0:
            raise ValueError('--k-max и --l-max должны быть неотрицательными')
        residuals, own = {}, None
        if data.get('mu') is not None:
            f = serializer.nonlinearity()
            orbit = find_periodic_orbit(f, data['mu'], step=data.get('step'))
            own = equation_residual(orbit, f)
            for l in range(1, options['residual_l_max'] + 1):
                residuals[l] = cooke_residual(orbit, l, f)
            logger.info('%s mu=%g: T=%.10g, невязка орбиты %.3e', f.name, data['mu'], orbit.period, own)

        rows = []
        for k in range(options['k_max'] + 1):
            for l in range(options['l_max'] + 1):
                image = cooke_map(critical_value(k), linear_period(k), l)
                row = {'k': k, 'l': l, 'mu_out': image.mu_out, 'T_out': image.T_out,
                       'branch_ok': branch_map_check(k, l), 'orbit_residual': None, 'equation_residual': None}
                if k == 0 and l in residuals:
                    row.update(orbit_residual=residuals[l], equation_residual=own)
                rows.append(row)
        report = CookeReportSerializer({
            'all_branches_ok': all(row['branch_ok'] for row in rows), 'rows': rows,
            'mu': data.get('mu'), 'equation_residual': own,
            'orbit_residuals': [{'l': l, 'residual': value} for l, value in residuals.items()],
        }).data
        return COLUMNS, report['rows'], report

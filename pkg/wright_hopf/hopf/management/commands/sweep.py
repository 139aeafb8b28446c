from django.core.management.base import CommandError

from hopf.reports import SWEEP_COLUMNS, sweep_report
from hopf.tasks import run_sweep

from ._base import EXIT_USAGE, HopfCommand


class Command(HopfCommand):
    help = 'Развёртка по eta на ветви k = 0: амплитуда, период и оценки периода'

    def add_run_arguments(self, parser):
        parser.add_argument('--k', type=int, help='поддерживается только k = 0')
        parser.add_argument('--eta-grid', help='список через запятую или сетка "a..b:n"')
        parser.add_argument('--step', type=float, help='шаг 1/m, m >= 20')

    def run(self, serializer, options):
        data = serializer.validated_data
        if data['k'] != 0:
            raise CommandError('Развёртка поддерживает только k = 0', returncode=EXIT_USAGE)
        if not data.get('eta_grid'):
            raise CommandError('Укажите --eta-grid', returncode=EXIT_USAGE)
        f = serializer.nonlinearity()
        table = run_sweep(f, data['eta_grid'], k=0, step=data.get('step'))
        report = sweep_report(f, table, k=0)
        if table.r_squared is not None:
            self.stderr.write(f'amplitude^2 ~ eta: R^2 = {table.r_squared:.6f}')
        return SWEEP_COLUMNS, report['rows'], report

from django.core.management.base import CommandError

from hopf.reports import BOUNDS_COLUMNS, bounds_report

from ._base import EXIT_USAGE, HopfCommand


class Command(HopfCommand):
    help = 'Оценки периода T^k_eta, выбранные по классификации нелинейности'

    def add_run_arguments(self, parser):
        parser.add_argument('--k', type=int, help='номер ветви, k >= 0')
        parser.add_argument('--eta', type=float)
        parser.add_argument('--eta-grid', help='список через запятую или сетка "a..b:n"')

    def run(self, serializer, options):
        data = serializer.validated_data
        etas = data.get('eta_grid') or ([data['eta']] if data.get('eta') is not None else None)
        if not etas:
            raise CommandError('Укажите --eta или --eta-grid', returncode=EXIT_USAGE)
        report = bounds_report(serializer.nonlinearity(), data['k'], etas)
        return BOUNDS_COLUMNS, report['bounds'], report

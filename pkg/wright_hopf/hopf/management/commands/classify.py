from hopf.reports import CLASSIFY_COLUMNS, classify_report

from ._base import HopfCommand


class Command(HopfCommand):
    help = 'Направление бифуркаций Хопфа для диапазона k и случай всей последовательности'

    def add_run_arguments(self, parser):
        parser.add_argument('--k-range', help='диапазон k вида "a..b", по умолчанию 0..3')

    def run(self, serializer, options):
        report = classify_report(serializer.nonlinearity(), serializer.k_values())
        sequence = report['sequence']
        rows = [dict(point, case=sequence['case'], n=sequence['n']) for point in report['points']]
        return CLASSIFY_COLUMNS + ['case', 'n'], rows, report

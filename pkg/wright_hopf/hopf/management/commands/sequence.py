from hopf.reports import sequence_report

from ._base import HopfCommand

COLUMNS = ['case', 'n', 'ratio', 'h_min', 'h_limit', 'h_max', 'degenerate_k']


class Command(HopfCommand):
    help = 'Случай последовательности бифуркаций по отношению C/B^2 и пороги H(0), 22/15, H(-1)'

    def run(self, serializer, options):
        report = sequence_report(serializer.nonlinearity())
        row = dict(report, degenerate_k=';'.join(str(k) for k in report['degenerate_k']))
        return COLUMNS, [row], report

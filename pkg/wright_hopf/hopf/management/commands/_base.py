"""
Общая часть команд: источник нелинейности, файл экспериментов, формат вывода и коды выхода.
"""
import logging
import os

import yaml
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from hopf.exceptions import ConvergenceError, HopfError, SimulationError
from hopf.reports import render_csv, render_json, write_report
from hopf.serializers import FORMATS, RunConfigSerializer

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

# ключи RunConfig, которые команды могут передать из опций
CONFIG_KEYS = ('preset', 'cubic', 'k', 'k_range', 'eta', 'eta_grid', 'mu', 'amplitude', 'step', 't_end',
               'format', 'output')


def open_file(path):
    with open(path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f)
    return data or {}


def load_experiment(path, name=None) -> dict:
    """Фрагмент RunConfig из YAML: весь файл или раздел experiments.<name>"""
    if not os.path.exists(path):
        raise CommandError(f'Файл конфигурации {path} не найден', returncode=EXIT_USAGE)
    data = open_file(path)
    if name is None:
        return dict(data.get('defaults', {}))
    experiments = data.get('experiments', {})
    if name not in experiments:
        raise CommandError(f'Эксперимент {name!r} не найден в {path}, доступны: {", ".join(experiments)}',
                           returncode=EXIT_USAGE)
    config = dict(data.get('defaults', {}))
    config.update(experiments[name])
    return config


class HopfCommand(BaseCommand):
    requires_system_checks = []
    default_preset = None

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group()
        source.add_argument('--preset', help='wright, ikeda, poly-switch, poly-subcritical или cubic(B, C)')
        source.add_argument('--cubic', nargs=3, type=float, metavar=('D1', 'F2', 'F3'),
                            help="f'(0), f''(0), f'''(0) кубического многочлена")
        parser.add_argument('--config', help='YAML-файл с именованными экспериментами')
        parser.add_argument('--experiment', help='имя эксперимента в файле конфигурации')
        parser.add_argument('--format', choices=FORMATS)
        parser.add_argument('--output', help='записать результат в файл вместо stdout')
        self.add_run_arguments(parser)

    def add_run_arguments(self, parser):
        pass

    def collect_config(self, options) -> dict:
        config = {}
        if options.get('config') or options.get('experiment'):
            config.update(load_experiment(options.get('config') or settings.EXPERIMENTS_FILE,
                                          options.get('experiment')))
            # источник нелинейности из командной строки заменяет файловый целиком
            if options.get('preset') is not None or options.get('cubic') is not None:
                config.pop('preset', None)
                config.pop('cubic', None)
        # флаги командной строки перекрывают значения из файла
        for key in CONFIG_KEYS:
            if options.get(key) is not None:
                config[key] = options[key]
        if self.default_preset and config.get('preset') is None and config.get('cubic') is None:
            config['preset'] = self.default_preset
        return config

    def handle(self, *args, **options):
        serializer = RunConfigSerializer(data=self.collect_config(options))
        if not serializer.is_valid():
            raise CommandError(f'Некорректные параметры: {dict(serializer.errors)}', returncode=EXIT_USAGE)
        data = serializer.validated_data
        try:
            columns, rows, payload = self.run(serializer, options)
        except (SimulationError, ConvergenceError) as error:
            logger.error('%s: %s', type(error).__name__, error)
            raise CommandError(str(error), returncode=EXIT_NUMERICAL)
        except (HopfError, ValueError) as error:
            raise CommandError(str(error), returncode=EXIT_USAGE)
        text = render_json(payload) if data['format'] == 'json' else render_csv(columns, rows)
        write_report(text, data.get('output'), self.stdout)

    def run(self, serializer, options):
        """Возвращает (колонки CSV, строки CSV, JSON-отчёт)"""
        raise NotImplementedError

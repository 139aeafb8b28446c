import logging

from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from ujson import loads as load_json

from .exceptions import ConvergenceError, HopfError, SimulationError
from .reports import bounds_report, classify_report, round_floats, sequence_report, sweep_report
from .serializers import RunConfigSerializer, parse_eta_grid
from .tasks import run_sweep

logger = logging.getLogger(__name__)


def config_from_query(params) -> dict:
    """Параметры GET-запроса в формат RunConfigSerializer"""
    data = {key: params[key] for key in ('preset', 'k_range', 'k', 'eta', 'eta_grid', 'step') if key in params}
    if 'cubic' in params:
        data['cubic'] = [item for item in params['cubic'].split(',') if item.strip()]
    return data


class HopfAPIView(APIView):
    """
    Общая обработка ошибок: неверные параметры 400, численный сбой 422
    """
    throttle_scope = 'anon'

    def handle_hopf(self, config: dict, build):
        serializer = RunConfigSerializer(data=config)
        if not serializer.is_valid():
            return Response({'Status': False, 'Errors': serializer.errors}, status=status.HTTP_400_BAD_REQUEST)
        try:
            payload = build(serializer)
        except (SimulationError, ConvergenceError) as error:
            logger.warning('Численный сбой: %s', error)
            return Response({'Status': False, 'Errors': str(error)}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        except (HopfError, ValueError) as error:
            return Response({'Status': False, 'Errors': str(error)}, status=status.HTTP_400_BAD_REQUEST)
        return Response(dict(round_floats(payload), Status=True))


class ClassifyView(HopfAPIView):
    """
    Классификация бифуркаций Хопфа для диапазона k
    """

    def get(self, request, *args, **kwargs):
        return self.handle_hopf(config_from_query(request.query_params),
                                lambda s: classify_report(s.nonlinearity(), s.k_values()))


class SequenceView(HopfAPIView):
    """
    Случай всей последовательности бифуркаций и индекс переключения n
    """

    def get(self, request, *args, **kwargs):
        return self.handle_hopf(config_from_query(request.query_params),
                                lambda s: sequence_report(s.nonlinearity()))


class BoundsView(HopfAPIView):
    """
    Оценки периода на k-й ветви
    """

    def get(self, request, *args, **kwargs):
        config = config_from_query(request.query_params)
        if 'eta' not in config and 'eta_grid' not in config:
            return Response({'Status': False, 'Errors': 'Укажите eta или eta_grid'},
                            status=status.HTTP_400_BAD_REQUEST)
        return self.handle_hopf(config, self._build)

    @staticmethod
    def _build(serializer):
        data = serializer.validated_data
        etas = data.get('eta_grid') or [data['eta']]
        return bounds_report(serializer.nonlinearity(), data['k'], etas)


class SweepView(HopfAPIView):
    """
    Развёртка по eta на ветви k = 0, точки считаются задачами Celery
    """

    def post(self, request, *args, **kwargs):
        config = dict(request.data.items()) if hasattr(request.data, 'items') else {}
        grid = config.get('eta_grid')
        if not grid:
            return Response({'Status': False, 'Errors': 'Укажите eta_grid'}, status=status.HTTP_400_BAD_REQUEST)
        if isinstance(grid, str) and grid.lstrip().startswith('['):
            try:
                config['eta_grid'] = load_json(grid)
            except ValueError:
                return Response({'Status': False, 'Errors': 'Неверный формат eta_grid'},
                                status=status.HTTP_400_BAD_REQUEST)
        return self.handle_hopf(config, self._build)

    @staticmethod
    def _build(serializer):
        data = serializer.validated_data
        f = serializer.nonlinearity()
        table = run_sweep(f, parse_eta_grid(data['eta_grid']), k=data['k'], step=data.get('step'))
        return sweep_report(f, table, k=data['k'])

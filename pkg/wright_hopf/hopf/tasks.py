import logging
from typing import Iterable, Optional

from celery import group

from wright_hopf.celery import app

from .bifurcation import Direction, classify
from .dde_sim import SweepRow, SweepTable, summarize_sweep
from .dde_sim import sweep_cell as compute_cell
from .nonlinearity import Nonlinearity, from_descriptor

logger = logging.getLogger(__name__)


@app.task()
def sweep_cell(descriptor: dict, eta: float, direction: str, k: int = 0, step: Optional[float] = None) -> dict:
    """Одна точка развёртки; нелинейность восстанавливается по описанию"""
    f = from_descriptor(descriptor)
    return compute_cell(f, eta, Direction(direction), k, step).as_dict()


def run_sweep(f: Nonlinearity, eta_grid: Iterable[float], k: int = 0, step: Optional[float] = None) -> SweepTable:
    """
    Точки развёртки считаются группой задач Celery,
    строки возвращаются по возрастанию eta
    """
    if f.descriptor is None:
        raise ValueError(f'{f.name}: нет сериализуемого описания, развёртку через Celery запустить нельзя')
    f.require_classifiable()
    direction = classify(f.B, f.C, k)
    etas = sorted(float(eta) for eta in eta_grid)
    logger.info('%s: развёртка k=%d по %d точкам eta, направление %s', f.name, k, len(etas), direction.value)
    job = group(sweep_cell.s(f.descriptor, eta, direction.value, k, step) for eta in etas)
    results = job.apply_async().get()
    return summarize_sweep(direction, [SweepRow(**row) for row in results])

"""
Исключения приложения hopf.

Численные сбои (SimulationError, ConvergenceError) команды CLI превращают
в код выхода 3, ошибки входных данных в код 2.
"""


class HopfError(Exception):
    """Базовое исключение приложения"""


class NonlinearityError(HopfError, ValueError):
    pass


class UnknownPresetError(NonlinearityError):
    def __init__(self, name):
        self.name = name
        super().__init__(f'Неизвестная нелинейность: {name!r}')


class DegenerateLinearizationError(NonlinearityError):
    def __init__(self, d1):
        self.d1 = d1
        super().__init__(f"f'(0) = {d1:.3e}: линеаризация вырождена")


class NegativeSlopeError(NonlinearityError):
    def __init__(self, d1):
        self.d1 = d1
        super().__init__(f"f'(0) = {d1} < 0: классификация поддерживает только f'(0) > 0")


class CriticalPointError(NonlinearityError):
    def __init__(self, xi, d1):
        self.xi = xi
        self.d1 = d1
        super().__init__(f"f'({xi}) = {d1:.3e}: производная Шварца не определена")


class InconsistentDerivativesError(NonlinearityError):
    pass


class ConvergenceError(HopfError, ArithmeticError):
    """Итерации Ньютона не сошлись; хранит последнее приближение и невязку"""

    def __init__(self, message, last_iterate=None, residual=None):
        self.last_iterate = last_iterate
        self.residual = residual
        super().__init__(f'{message} (последнее приближение {last_iterate}, невязка {residual})')


class DegenerateBifurcationError(HopfError, ValueError):
    pass


class BoundDomainError(HopfError, ValueError):
    pass


class SimulationError(HopfError, ArithmeticError):
    pass


class DivergenceError(SimulationError):
    def __init__(self, time):
        self.time = time
        super().__init__(f'Решение разрушилось при t = {time:.6g}')


class NoOscillationError(SimulationError):
    pass


class NonConvergenceError(SimulationError):
    pass


class BracketError(SimulationError):
    pass


class InsufficientCoverageError(SimulationError):
    pass

# calculations/exceptions.py
"""
Исключения модели. Все наследуют ValueError, как и ошибки валидации
в остальных калькуляторах.
"""


class ModelError(ValueError):
    """Базовая ошибка модели."""


class DomainError(ModelError):
    """Параметр или аргумент вне допустимой области (D_L, D_L^g, T < t, ...)."""


class UnsupportedModel(ModelError):
    """Операция недоступна для данного вида субординатора."""


class WrongCase(ModelError):
    """Операция вызвана для неподходящего случая уравнения Риккати."""


class ScenarioError(ModelError):
    """Некорректный файл сценария или поле вне диапазона."""


class BlowUp(ModelError):
    """
    Решение Ψ¹ покидает область определения раньше запрошенного горизонта.

    Хранит время выхода и усеченное решение.
    """

    def __init__(self, message, t_escape, solution=None):
        super().__init__(message)
        self.t_escape = t_escape
        self.solution = solution


class EnvelopeViolation(ModelError):
    """Траектория Y превысила огибающую интенсивности на шаге прореживания."""

    def __init__(self, message, dt):
        super().__init__(message)
        self.dt = dt

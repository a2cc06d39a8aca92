# cli/validation_ranges.py
"""
Централизованные диапазоны валидации для полей сценария.
Обеспечивает консистентность и отсекает заведомо некорректные значения
до построения модели.
"""
from enum import Enum
from typing import Optional, Tuple

from calculations.exceptions import ScenarioError


class ValidationType(Enum):
    """Типы валидации: (min, max, знаков после запятой в подсказке)."""

    # Скорости возврата к среднему, 1/день
    MEAN_REVERSION = (1e-6, 10.0, 6)
    # Волатильность базовой компоненты
    VOLATILITY = (0.0, 10.0, 6)
    # Уровни сноса (могут быть отрицательными)
    DRIFT = (-1e6, 1e6, 6)

    # Параметры меры Леви
    LEVY_INTENSITY = (1e-12, 1e6, 6)  # c > 0
    LEVY_DECAY = (1e-9, 1e6, 6)  # λ > 0
    STABLE_INDEX = (0.0, 0.999999, 6)  # α ∈ [0, 1)
    JUMP_SIZE = (1e-9, 1e3, 6)  # a > 0

    # Смена меры
    THETA = (-1e6, 1e6, 6)
    BETA = (0.0, 1.0, 6)

    # Состояние рынка
    STATE_X = (-1e6, 1e6, 6)
    STATE_Y = (0.0, 1e6, 6)  # Y(t) ≥ 0
    TIME = (0.0, 36500.0, 4)  # дни

    # Сетка τ
    TAU = (0.0, 36500.0, 4)
    GRID_POINTS = (2, 1_000_000, 0)

    # Монте-Карло
    PATHS = (1, 100_000_000, 0)
    SEED = (0, 2 ** 63 - 1, 0)
    STEP = (1e-9, 1e3, 9)


class ValidationRanges:
    """
    Класс для работы с диапазонами валидации.
    Предоставляет удобный доступ к предустановленным диапазонам.
    """

    @staticmethod
    def get_tooltip(validation_type: ValidationType) -> str:
        """
        Получить подсказку для типа валидации.

        :param validation_type: Тип валидации
        :return: Строка с описанием допустимого диапазона
        """
        min_val, max_val, decimals = validation_type.value

        if validation_type == ValidationType.BETA:
            return f"Допустимые значения: от {min_val} до {max_val} (доля скорости возврата)"

        elif validation_type in [ValidationType.DRIFT, ValidationType.THETA, ValidationType.STATE_X]:
            return f"Допустимые значения: от {min_val} до {max_val} (может быть отрицательным)"

        elif decimals == 0:
            return f"Допустимые значения: целое от {min_val} до {max_val}"

        elif min_val > 0:
            return f"Допустимые значения: больше {min_val}"

        elif min_val == 0:
            return f"Допустимые значения: от {min_val} и выше"

        else:
            return f"Допустимые значения: от {min_val} до {max_val}"

    @staticmethod
    def validate_value(value: float, validation_type: ValidationType) -> Tuple[bool, Optional[str]]:
        """
        Проверить значение на соответствие диапазону.

        :param value: Проверяемое значение
        :param validation_type: Тип валидации
        :return: (is_valid, error_message)
        """
        min_val, max_val, decimals = validation_type.value

        if value != value:
            return False, "Значение не является числом"

        if decimals == 0 and value != int(value):
            return False, f"Значение {value} должно быть целым"

        if value < min_val:
            return False, f"Значение {value} меньше минимально допустимого {min_val}"

        if value > max_val:
            return False, f"Значение {value} больше максимально допустимого {max_val}"

        return True, None


# Поля сценария -> тип валидации
FIELD_VALIDATION_MAP = {
    # Факторы
    'mu_x': ValidationType.DRIFT,
    'alpha_x': ValidationType.MEAN_REVERSION,
    'sigma_x': ValidationType.VOLATILITY,
    'x0': ValidationType.STATE_X,
    'mu_y': ValidationType.DRIFT,
    'alpha_y': ValidationType.MEAN_REVERSION,
    'y0': ValidationType.STATE_Y,

    # Субординатор
    'c': ValidationType.LEVY_INTENSITY,
    'lambda': ValidationType.LEVY_DECAY,
    'alpha': ValidationType.STABLE_INDEX,
    'a': ValidationType.JUMP_SIZE,

    # Смена меры
    'theta1': ValidationType.THETA,
    'theta2': ValidationType.THETA,
    'beta1': ValidationType.BETA,
    'beta2': ValidationType.BETA,

    # Состояние
    't': ValidationType.TIME,
    'x': ValidationType.STATE_X,
    'y': ValidationType.STATE_Y,

    # Сетка
    'tau_min': ValidationType.TAU,
    'tau_max': ValidationType.TAU,
    'n_points': ValidationType.GRID_POINTS,

    # Монте-Карло
    'n_paths': ValidationType.PATHS,
    'seed': ValidationType.SEED,
    'dt': ValidationType.STEP,
}


def field_help(field_name: str, description: Optional[str] = None) -> str:
    """
    Текст справки argparse для поля: описание и допустимый диапазон.

    :param field_name: Имя поля сценария (например, 'beta2')
    :param description: Описание параметра
    """
    tooltip = ValidationRanges.get_tooltip(FIELD_VALIDATION_MAP[field_name])
    return f"{description}. {tooltip}" if description else tooltip


def require_field(field_name: str, value) -> float:
    """
    Преобразует значение поля к числу и проверяет диапазон.

    Raises:
        ScenarioError: значение не число или вне диапазона
    """
    try:
        number = float(value)
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"Поле {field_name}: ожидается число, получено {value!r}") from e
    validation_type = FIELD_VALIDATION_MAP.get(field_name, ValidationType.DRIFT)
    is_valid, error = ValidationRanges.validate_value(number, validation_type)
    if not is_valid:
        raise ScenarioError(f"Поле {field_name}: {error}")
    return number

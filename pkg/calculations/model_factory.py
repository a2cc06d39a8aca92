# calculations/model_factory.py
"""
Фабрика моделей субординатора и калькуляторов цен.
Ленивый импорт модулей и кэширование классов.
"""
import logging
from functools import lru_cache
from typing import Optional

from calculations.exceptions import ScenarioError
from calculations.levy_models import LevyModel
from calculations.measure_change import FactorParams

logger = logging.getLogger(__name__)


class ModelFactory:
    """Создание субординаторов по описанию из сценария и калькуляторов цен."""

    # Тип субординатора -> (модуль, класс, {ключ сценария: аргумент конструктора})
    _LEVY_MODELS = {
        "dirac": ("calculations.levy_models", "DiracModel", {"a": "a"}),
        "cpexp": ("calculations.levy_models", "CompoundPoissonExpModel", {"c": "c", "lambda": "lam"}),
        "tempered_stable": ("calculations.levy_models", "TemperedStableModel",
                            {"c": "c", "lambda": "lam", "alpha": "alpha"}),
    }

    _PRICERS = {
        "arith": ("calculations.arithmetic_pricing", "ArithmeticPricingCalculator"),
        "geom": ("calculations.geometric_pricing", "GeometricPricingCalculator"),
    }

    def __init__(self):
        self._calculators = {}

    @staticmethod
    @lru_cache(maxsize=8)
    def _load_class(module_name: str, class_name: str):
        """Получить класс с ленивым импортом и кэшированием."""
        module = __import__(module_name, fromlist=[class_name])
        return getattr(module, class_name)

    @classmethod
    def levy_types(cls):
        return tuple(cls._LEVY_MODELS)

    def build_levy_model(self, levy_spec: dict) -> LevyModel:
        """
        Субординатор по описанию вида {"type": "cpexp", "c": 0.4, "lambda": 2.0}.

        Raises:
            ScenarioError: неизвестный тип или недостающий параметр
        """
        if not isinstance(levy_spec, dict):
            raise ScenarioError("Описание субординатора должно быть объектом JSON")
        kind = levy_spec.get("type")
        if kind not in self._LEVY_MODELS:
            raise ScenarioError(f"Неизвестный тип субординатора: {kind!r}. "
                                f"Допустимые: {', '.join(self._LEVY_MODELS)}")
        module_name, class_name, arguments = self._LEVY_MODELS[kind]
        missing = [key for key in arguments if key not in levy_spec]
        if missing:
            raise ScenarioError(f"Для субординатора {kind} не заданы параметры: {', '.join(missing)}")
        try:
            kwargs = {arg: float(levy_spec[key]) for key, arg in arguments.items()}
        except (TypeError, ValueError) as e:
            raise ScenarioError(f"Параметры субординатора {kind} должны быть числами: {e}") from e
        model = self._load_class(module_name, class_name)(**kwargs)
        logger.debug("Создан субординатор %r", model)
        return model

    def get_pricer(self, spot_model: str, model: LevyModel, fp: FactorParams, delta: Optional[float] = None):
        """
        Калькулятор для арифметической ("arith") или геометрической ("geom")
        модели. Экземпляры кэшируются по (модель, субординатор, параметры, δ).
        delta учитывается только геометрической моделью.
        """
        if spot_model not in self._PRICERS:
            raise ScenarioError(f"Неизвестная модель спот-цены: {spot_model!r}")
        key = (spot_model, model, fp, delta)
        if key not in self._calculators:
            calculator_class = self._load_class(*self._PRICERS[spot_model])
            if spot_model == "geom" and delta is not None:
                self._calculators[key] = calculator_class(model, fp, delta)
            else:
                self._calculators[key] = calculator_class(model, fp)
        return self._calculators[key]


def build_levy_model(levy_spec: dict) -> LevyModel:
    return ModelFactory().build_levy_model(levy_spec)

# calculations/seasonality.py
"""
Детерминированная сезонная составляющая Λ_a(t) / Λ_g(t).

Виды:
- constant(level);
- trig(level, amplitude, period_days, phase): level + amplitude·sin(2π(t - phase)/period);
- formula(expression): пользовательское выражение от t (дни), разбирается SymPy.
"""
import logging
import math
import re
from dataclasses import dataclass
from typing import Optional, Set

import numpy as np
from sympy import Symbol, SympifyError, lambdify, sympify

from calculations.exceptions import DomainError, ScenarioError

logger = logging.getLogger(__name__)

SEASONALITY_KINDS = ("constant", "trig", "formula")

_TIME = Symbol("t")


class SeasonalityFormulaEvaluator:
    """
    Разбор выражения сезонности от одной переменной t.

    Поддерживает запись вида "Λ(t) = 50 + 5*cos(2*pi*t/365)" и
    простые LaTeX-операторы (\\cdot, \\times, \\frac{a}{b}).
    """

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def _preprocess_formula(self, formula_text: str) -> str:
        """
        Предобработка формулы: конвертация в синтаксис SymPy.

        Args:
            formula_text: Исходная формула

        Returns:
            Обработанная формула в синтаксисе SymPy
        """
        formula_text = formula_text.strip()

        # Если есть знак равенства, берем правую часть
        if '=' in formula_text:
            formula_text = formula_text.split('=', 1)[1].strip()

        processed = formula_text
        for latex, replacement in ((r'\times', '*'), (r'\cdot', '*'), (r'\div', '/')):
            processed = processed.replace(latex, replacement)

        # \frac{числитель}{знаменатель} → (числитель)/(знаменатель)
        processed = re.sub(r'\\frac\{([^}]+)\}\{([^}]+)\}', r'(\1)/(\2)', processed)
        processed = processed.replace('^', '**')

        self.logger.debug("Preprocessed seasonality: '%s' → '%s'", formula_text, processed)
        return processed

    def parse_variables(self, formula_text: str) -> Set[str]:
        """
        Извлекает все переменные из формулы.

        Raises:
            ScenarioError: При ошибке разбора
        """
        try:
            expression = sympify(self._preprocess_formula(formula_text))
        except (SympifyError, SyntaxError, TypeError) as e:
            error_msg = f"Ошибка разбора формулы сезонности: {e}"
            self.logger.error(error_msg)
            raise ScenarioError(error_msg) from e
        return {str(v) for v in expression.free_symbols}

    def compile(self, formula_text: str):
        """
        Компилирует формулу в векторизованную функцию f(t).

        Raises:
            ScenarioError: Формула не разбирается или содержит переменные кроме t
        """
        unknown = self.parse_variables(formula_text) - {"t"}
        if unknown:
            raise ScenarioError(
                f"Формула сезонности может зависеть только от t, найдены: {', '.join(sorted(unknown))}"
            )
        expression = sympify(self._preprocess_formula(formula_text))
        func = lambdify(_TIME, expression, modules="numpy")

        def evaluate(t):
            # Константа из lambdify не векторизуется сама
            return np.broadcast_to(np.asarray(func(np.asarray(t, dtype=float)), dtype=float),
                                   np.shape(t)).copy()

        return evaluate


@dataclass(frozen=True)
class Seasonality:
    """Сезонная функция цены."""

    kind: str = "constant"
    level: float = 0.0
    amplitude: float = 0.0
    period_days: float = 365.0
    phase: float = 0.0
    expression: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SEASONALITY_KINDS:
            raise ScenarioError(f"Неизвестный вид сезонности: {self.kind}")
        if self.kind == "trig" and not self.period_days > 0:
            raise ScenarioError(f"Период сезонности должен быть больше 0, получено {self.period_days}")
        if self.kind == "formula":
            if not self.expression:
                raise ScenarioError("Для сезонности вида formula требуется выражение")
            object.__setattr__(self, "_compiled", SeasonalityFormulaEvaluator().compile(self.expression))

    def __call__(self, t):
        """Значение Λ(t); t - скаляр или массив (дни)."""
        t_arr = np.asarray(t, dtype=float)
        if self.kind == "constant":
            value = np.full(t_arr.shape, self.level)
        elif self.kind == "trig":
            value = self.level + self.amplitude * np.sin(2.0 * math.pi * (t_arr - self.phase) / self.period_days)
        else:
            value = self._compiled(t_arr)
        if value.ndim == 0:
            return float(value)
        return value

    def require_positive(self, t) -> None:
        """
        Геометрическая модель требует Λ_g(t) > 0.

        Raises:
            DomainError: если сезонность неположительна в t
        """
        value = np.asarray(self(t))
        if np.any(value <= 0) or not np.all(np.isfinite(value)):
            raise DomainError("Сезонность Λ_g должна быть строго положительной для геометрической модели")

    @classmethod
    def constant(cls, level: float) -> "Seasonality":
        return cls(kind="constant", level=level)

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "level": self.level}
        if self.kind == "trig":
            return {"kind": "trig", "level": self.level, "amplitude": self.amplitude,
                    "period_days": self.period_days, "phase": self.phase}
        return {"kind": "formula", "expression": self.expression}

    @classmethod
    def from_dict(cls, data: dict) -> "Seasonality":
        try:
            kind = data.get("kind", "constant")
            if kind == "formula":
                return cls(kind=kind, expression=str(data["expression"]))
            return cls(
                kind=kind,
                level=float(data.get("level", 0.0)),
                amplitude=float(data.get("amplitude", 0.0)),
                period_days=float(data.get("period_days", 365.0)),
                phase=float(data.get("phase", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ScenarioError):
                raise
            raise ScenarioError(f"Некорректное описание сезонности: {e}") from e

# calculations/runge_kutta.py
"""
Явный метод Рунге-Кутты-Фельберга 4(5) для автономных систем ОДУ.

Решение продвигается формулой 4-го порядка, разность с вложенной формулой
5-го порядка дает оценку локальной ошибки. Шаг ограничен сверху max_step и
делится пополам, если какая-либо стадия выходит за допустимую область
(барьер), поэтому решение не перескакивает через границу при взрыве.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from config import RICCATI_MAX_STEP, RICCATI_MAX_STEPS, RICCATI_TOLERANCE

logger = logging.getLogger(__name__)

# Таблица Бутчера RKF45
STAGE_TIMES = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)
BUTCHER_TABLE = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3554 / 2565, 1859 / 4104, -11 / 40),
)
WEIGHTS_4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)
# b5 - b4
ERROR_WEIGHTS = (1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)

ORDER = 4
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
MIN_STEP_RATIO = 1e-14


@dataclass
class IntegrationResult:
    """Принятые узлы интегрирования и значения поля в них."""

    t: np.ndarray
    y: np.ndarray
    dydt: np.ndarray
    n_steps: int
    n_rejected: int
    truncated: bool = False

    @property
    def t_final(self) -> float:
        return float(self.t[-1])


class RKF45Integrator:
    """
    Интегратор dy/dt = f(y) на [0, horizon].

    Args:
        rtol, atol: Допуск локальной ошибки на шаг
        max_step: Верхняя граница шага
        fixed_step: Постоянный шаг без адаптации (для проверки порядка)
    """

    def __init__(self, rtol: float = RICCATI_TOLERANCE, atol: float = RICCATI_TOLERANCE,
                 max_step: float = RICCATI_MAX_STEP, fixed_step: Optional[float] = None,
                 max_steps: int = RICCATI_MAX_STEPS):
        if fixed_step is not None and not fixed_step > 0:
            raise ValueError(f"Шаг должен быть больше 0, получено {fixed_step}")
        if not max_step > 0:
            raise ValueError(f"Максимальный шаг должен быть больше 0, получено {max_step}")
        self.rtol = rtol
        self.atol = atol
        self.max_step = max_step
        self.fixed_step = fixed_step
        self.max_steps = max_steps
        self.logger = logging.getLogger(__name__)

    def _stages(self, f, y, fy, h, admissible):
        """Стадии RKF45; None, если какая-либо стадия вне области."""
        k = [fy]
        for row in BUTCHER_TABLE[1:]:
            stage = y + h * sum(a * k_j for a, k_j in zip(row, k))
            if admissible is not None and not admissible(stage):
                return None
            k.append(f(stage))
        return k

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], y0: Sequence[float], horizon: float,
                  t_eval: Optional[Sequence[float]] = None,
                  admissible: Optional[Callable[[np.ndarray], bool]] = None) -> IntegrationResult:
        """
        Интегрирует систему от 0 до horizon.

        Узлы t_eval попадают в сетку точно. Если шаг, уменьшенный до
        MIN_STEP_RATIO·horizon, все еще выводит решение из области admissible,
        интегрирование прекращается с truncated = True.
        """
        if not horizon > 0:
            raise ValueError(f"Горизонт должен быть больше 0, получено {horizon}")
        y = np.asarray(y0, dtype=float).copy()
        fy = np.asarray(f(y), dtype=float)
        targets = sorted({float(v) for v in (t_eval or ()) if 0.0 < v < horizon} | {float(horizon)})
        target_index = 0

        times, states, fields = [0.0], [y.copy()], [fy.copy()]
        t = 0.0
        h = self.fixed_step if self.fixed_step is not None else min(self.max_step, horizon / 100.0)
        h_min = MIN_STEP_RATIO * horizon
        n_steps = n_rejected = 0
        truncated = False

        while target_index < len(targets):
            if n_steps + n_rejected >= self.max_steps:
                raise RuntimeError(f"Превышено число шагов интегратора ({self.max_steps}) при t = {t}")
            target = targets[target_index]
            remaining = target - t
            # остаток меньше ошибки округления сливается с шагом
            landing = h >= remaining - 1e-12 * max(1.0, target)
            h_try = remaining if landing else h

            k = self._stages(f, y, fy, h_try, admissible)
            if k is not None:
                y_new = y + h_try * sum(b * k_j for b, k_j in zip(WEIGHTS_4, k))
                if admissible is not None and not admissible(y_new):
                    k = None
            if k is None:
                # выход за барьер: только уменьшение шага
                n_rejected += 1
                h = h_try / 2.0
                if h < h_min:
                    truncated = True
                    self.logger.debug("Интегрирование остановлено у барьера при t = %.12g", t)
                    break
                continue

            if self.fixed_step is None:
                err = h_try * sum(e * k_j for e, k_j in zip(ERROR_WEIGHTS, k))
                scale = self.atol + self.rtol * np.maximum(np.abs(y), np.abs(y_new))
                err_norm = float(np.max(np.abs(err) / scale))
                factor = MAX_FACTOR if err_norm == 0.0 else SAFETY * err_norm ** (-1.0 / (ORDER + 1))
                factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
                if err_norm > 1.0:
                    n_rejected += 1
                    h = h_try * factor
                    self.logger.debug("Шаг отклонен: t = %.6g, h = %.3e, ошибка %.3e", t, h_try, err_norm)
                    if h < h_min:
                        truncated = True
                        break
                    continue
                h_next = min(self.max_step, h_try * factor)
            else:
                h_next = self.fixed_step

            t = target if landing else t + h_try
            y = y_new
            fy = np.asarray(f(y), dtype=float)
            times.append(t)
            states.append(y.copy())
            fields.append(fy.copy())
            n_steps += 1
            if landing:
                target_index += 1
                # возврат к шагу до укорочения
                h = max(h, h_next) if self.fixed_step is None else self.fixed_step
            else:
                h = h_next

        self.logger.debug("RKF45: %d шагов, %d отклонено, t_final = %.6g", n_steps, n_rejected, t)
        return IntegrationResult(
            t=np.asarray(times),
            y=np.asarray(states),
            dydt=np.asarray(fields),
            n_steps=n_steps,
            n_rejected=n_rejected,
            truncated=truncated,
        )

# calculations/arithmetic_pricing.py - Арифметическая модель спот-цены S = Λ_a + X + Y.
# Форвардные цены, свопы и премии за риск в замкнутой форме.
# Комментарии на русском. Поддержка UTF-8.
"""
Арифметическая модель: E_P[S(T)|F_t], F_Q(t,T), R^F = F_Q - E_P и их свойства.

Все знаменатели вида (1 - β) проходят через eta(x) = (1 - e^{-x})/x, поэтому
β = 1 (X под Q - броуновское движение со сносом) не требует отдельных ветвей.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy import integrate

from config import QUAD_LIMIT, SWAP_QUAD_RELTOL
from calculations.exceptions import DomainError
from calculations.levy_models import LevyModel
from calculations.measure_change import FactorParams, MeasureChange, eta, q_dynamics

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

CURVE_METHODS = ("closed_form", "ode", "monte_carlo")


@dataclass(frozen=True)
class MarketState:
    """Состояние рынка в момент t: X(t) = x, Y(t) = y ≥ 0."""

    t: float = 0.0
    x: float = 0.0
    y: float = 0.0

    def __post_init__(self):
        if self.y < 0:
            raise DomainError(f"Y(t) должно быть неотрицательным, получено {self.y}")
        if self.t < 0:
            raise DomainError(f"t должно быть неотрицательным, получено {self.t}")

    def time_to_maturity(self, T: ArrayLike) -> ArrayLike:
        """
        τ = T - t.

        Raises:
            DomainError: T < t
        """
        tau = np.asarray(T, dtype=float) - self.t
        if np.any(tau < 0) or np.any(np.isnan(tau)):
            raise DomainError(f"Дата поставки T должна быть не раньше t = {self.t}")
        if tau.ndim == 0:
            return float(tau)
        return tau


@dataclass
class CurveResult:
    """
    Кривая по сроку до поставки τ.

    values - основной столбец (премия за риск), columns - все столбцы
    в порядке вывода, meta - происхождение (модель, мера, метод).
    """

    taus: np.ndarray
    values: np.ndarray
    columns: Dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    standard_errors: Optional[np.ndarray] = None

    def __post_init__(self):
        self.taus = np.asarray(self.taus, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.taus.ndim != 1 or self.taus.shape != self.values.shape:
            raise DomainError("Сетка τ и значения кривой должны быть одномерными массивами одной длины")
        if self.taus.size > 1 and np.any(np.diff(self.taus) <= 0):
            raise DomainError("Сетка τ должна строго возрастать")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("Значения кривой должны быть конечными")
        if self.meta.get("method", "closed_form") not in CURVE_METHODS:
            raise DomainError(f"Неизвестный метод расчета кривой: {self.meta.get('method')}")

    @property
    def column_names(self):
        return ["tau_days"] + list(self.columns)

    def rows(self):
        """Строки таблицы (tau_days, столбцы...)."""
        stacked = [self.taus] + [np.asarray(v, dtype=float) for v in self.columns.values()]
        return np.column_stack(stacked)

    def zero_crossings(self) -> int:
        """Число смен знака основного столбца (нули с |v| < 1e-12 пропускаются)."""
        signs = np.sign(np.where(np.abs(self.values) < 1e-12, 0.0, self.values))
        signs = signs[signs != 0]
        return int(np.count_nonzero(np.diff(signs)))


@dataclass(frozen=True)
class PremiumLimits:
    """Предел премии на длинном конце и наклон в τ = 0."""

    limit_infinity: float
    slope_at_zero: float


@dataclass(frozen=True)
class SignConditions:
    """Достаточные условия профиля: R > 0 у короткого конца и R < 0 у длинного."""

    short_end_positive: bool
    long_end_negative: bool


def lambda_fn(x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """
    Λ(x, y) = (1 - e^{-xy})/y - (1 - e^{-x}) ≥ 0.

    Предел y → 0 равен x - (1 - e^{-x}), Λ(x, 1) = 0.
    """
    x_arr = np.asarray(x, dtype=float)
    value = x_arr * eta(x_arr * np.asarray(y, dtype=float)) + np.expm1(-x_arr)
    if np.ndim(value) == 0:
        return float(value)
    return value


class ArithmeticPricingCalculator:
    """
    Калькулятор арифметической модели для фиксированного субординатора и
    параметров факторов под P.
    """

    def __init__(self, model: LevyModel, fp: FactorParams):
        self.model = model
        self.fp = fp
        self.logger = logging.getLogger(__name__)

    # --- Условные ожидания без сезонности ---

    def _deseasonalized(self, mc: MeasureChange, state: MarketState, tau: ArrayLike) -> ArrayLike:
        fq = q_dynamics(self.model, self.fp, mc)
        return fq.x_mean(state.x, tau) + fq.y_mean(state.y, tau)

    def expected_spot_P(self, state: MarketState, T: ArrayLike) -> ArrayLike:
        """
        E_P[S(T)|F_t] = Λ_a(T) + X e^{-α_Xτ} + Y e^{-α_Yτ}
                        + (μ_X/α_X)(1 - e^{-α_Xτ}) + ((μ_Y + κ'(0))/α_Y)(1 - e^{-α_Yτ}).
        """
        tau = state.time_to_maturity(T)
        return self.fp.seasonality(T) + self._deseasonalized(MeasureChange(), state, tau)

    def forward_price(self, mc: MeasureChange, state: MarketState, T: ArrayLike) -> ArrayLike:
        """F_Q(t,T) = E_Q[S(T)|F_t] с параметрами q_dynamics."""
        tau = state.time_to_maturity(T)
        return self.fp.seasonality(T) + self._deseasonalized(mc, state, tau)

    def risk_premium(self, mc: MeasureChange, state: MarketState, T: ArrayLike) -> ArrayLike:
        """R^F(t,T) = F_Q - E_P; Λ_a сокращается."""
        tau = state.time_to_maturity(T)
        return self._deseasonalized(mc, state, tau) - self._deseasonalized(MeasureChange(), state, tau)

    def esscher_risk_premium(self, mc: MeasureChange, tau: ArrayLike) -> ArrayLike:
        """
        Премия при β̄ = (0, 0): θ₁(1 - e^{-α_Xτ})/α_X + (κ'(θ₂) - κ'(0))(1 - e^{-α_Yτ})/α_Y.

        Не зависит от X(t), Y(t).
        """
        if not mc.is_esscher:
            raise DomainError("Формула Эсшера требует β̄ = (0, 0)")
        mc.require_arithmetic(self.model)
        tau = np.asarray(tau, dtype=float)
        if np.any(tau < 0):
            raise DomainError("τ должно быть неотрицательным")
        jump_shift = self.model.cumulant(mc.theta2, 1) - self.model.cumulant(0.0, 1)
        value = (mc.theta1 * tau * eta(self.fp.alpha_x * tau)
                 + jump_shift * tau * eta(self.fp.alpha_y * tau))
        if np.ndim(value) == 0:
            return float(value)
        return value

    # --- Пределы и знаки ---

    def _require_limit_conditions(self, mc: MeasureChange) -> None:
        if self.fp.mu_x != 0.0 or self.fp.mu_y != 0.0:
            raise DomainError("Пределы премии определены только при μ_X = μ_Y = 0")
        if mc.beta1 >= 1.0 or mc.beta2 >= 1.0:
            raise DomainError("При β = 1 предел премии на бесконечности расходится")
        mc.require_arithmetic(self.model)

    def rp_limits(self, mc: MeasureChange, state: MarketState) -> PremiumLimits:
        """
        Предел R при τ → ∞ и производная по τ в нуле.

        Raises:
            DomainError: μ ≠ 0, β = 1 или θ₂ ∉ D_L
        """
        self._require_limit_conditions(mc)
        fp = self.fp
        k1_theta = self.model.cumulant(mc.theta2, 1)
        k1_zero = self.model.cumulant(0.0, 1)
        limit = (mc.theta1 / (fp.alpha_x * (1.0 - mc.beta1))
                 + (k1_theta - k1_zero) / (fp.alpha_y * (1.0 - mc.beta2))
                 + k1_zero * mc.beta2 / (fp.alpha_y * (1.0 - mc.beta2)))
        slope = (state.x * fp.alpha_x * mc.beta1 + state.y * fp.alpha_y * mc.beta2
                 + mc.theta1 + k1_theta - k1_zero)
        return PremiumLimits(limit_infinity=float(limit), slope_at_zero=float(slope))

    def sign_conditions(self, mc: MeasureChange, state: MarketState) -> SignConditions:
        limits = self.rp_limits(mc, state)
        return SignConditions(short_end_positive=limits.slope_at_zero > 0,
                              long_end_negative=limits.limit_infinity < 0)

    def theta1_window(self, mc: MeasureChange, state: MarketState) -> Optional[Tuple[float, float]]:
        """
        Интервал θ₁, при котором выполняются оба условия знака
        для заданных θ₂, β̄ и состояния. None, если интервал пуст.
        """
        base = self.rp_limits(MeasureChange(0.0, mc.theta2, mc.beta1, mc.beta2), state)
        lower = -base.slope_at_zero
        upper = -self.fp.alpha_x * (1.0 - mc.beta1) * base.limit_infinity
        if lower >= upper:
            return None
        return lower, upper

    def forward_asymptotic(self, mc: MeasureChange, state: MarketState, T: ArrayLike) -> ArrayLike:
        """
        Длинный конец при β₁ = 1: Λ_a(T) + X(t) + (μ_X + θ₁)(T - t) плюс
        стационарный уровень Y под Q (или его линейный рост при β₂ = 1).
        """
        if mc.beta1 != 1.0:
            raise DomainError("Асимптотика форварда определена только при β₁ = 1")
        fq = q_dynamics(self.model, self.fp, mc)
        tau = state.time_to_maturity(T)
        if fq.y_nonstationary:
            spike = state.y + fq.mu_y * np.asarray(tau)
        else:
            spike = fq.mu_y / fq.alpha_y
        return self.fp.seasonality(T) + state.x + fq.mu_x * np.asarray(tau) + spike

    # --- Свопы ---

    def _delivery_average(self, func, state: MarketState, T1: float, T2: float) -> float:
        if not state.t < T1 < T2:
            raise DomainError(f"Период поставки должен удовлетворять t < T1 < T2, получено t={state.t}, "
                              f"T1={T1}, T2={T2}")
        value, abserr = integrate.quad(lambda T: float(func(T)), T1, T2,
                                       epsabs=0.0, epsrel=SWAP_QUAD_RELTOL, limit=QUAD_LIMIT)
        self.logger.debug("Среднее по [%g, %g]: %.12g (оценка ошибки %.2e)", T1, T2, value, abserr)
        return value / (T2 - T1)

    def swap_price(self, mc: MeasureChange, state: MarketState, T1: float, T2: float) -> float:
        """F_Q(t, T1, T2) = (T2 - T1)⁻¹ ∫ F_Q(t, T) dT."""
        return self._delivery_average(lambda T: self.forward_price(mc, state, T), state, T1, T2)

    def swap_risk_premium(self, mc: MeasureChange, state: MarketState, T1: float, T2: float) -> float:
        """R^S(t, T1, T2) = (T2 - T1)⁻¹ ∫ R^F(t, T) dT."""
        return self._delivery_average(lambda T: self.risk_premium(mc, state, T), state, T1, T2)

    # --- Кривые ---

    def premium_curve(self, mc: MeasureChange, state: MarketState, taus) -> CurveResult:
        """Кривая премии с форвардом и ожидаемым спотом на сетке τ."""
        taus = np.asarray(taus, dtype=float)
        maturities = state.t + taus
        forward = self.forward_price(mc, state, maturities)
        expected = self.expected_spot_P(state, maturities)
        premium = self.risk_premium(mc, state, maturities)
        self.logger.info("Арифметическая кривая: %d точек, θ̄=(%g, %g), β̄=(%g, %g)",
                         taus.size, mc.theta1, mc.theta2, mc.beta1, mc.beta2)
        return CurveResult(
            taus=taus,
            values=premium,
            columns={"risk_premium": premium, "forward": forward, "expected_spot": expected},
            meta={"model": str(self.model), "spot_model": "arith", "measure": mc.to_dict(),
                  "method": "closed_form"},
        )


# --- Функциональный интерфейс ---

def expected_spot_P(model: LevyModel, fp: FactorParams, state: MarketState, T: ArrayLike) -> ArrayLike:
    return ArithmeticPricingCalculator(model, fp).expected_spot_P(state, T)


def forward_price(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                  T: ArrayLike) -> ArrayLike:
    return ArithmeticPricingCalculator(model, fp).forward_price(mc, state, T)


def risk_premium(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                 T: ArrayLike) -> ArrayLike:
    return ArithmeticPricingCalculator(model, fp).risk_premium(mc, state, T)


def esscher_risk_premium(model: LevyModel, fp: FactorParams, mc: MeasureChange, tau: ArrayLike) -> ArrayLike:
    return ArithmeticPricingCalculator(model, fp).esscher_risk_premium(mc, tau)


def rp_limits(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState) -> PremiumLimits:
    return ArithmeticPricingCalculator(model, fp).rp_limits(mc, state)


def sign_conditions(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState) -> SignConditions:
    return ArithmeticPricingCalculator(model, fp).sign_conditions(mc, state)


def theta1_window(model: LevyModel, fp: FactorParams, mc: MeasureChange,
                  state: MarketState) -> Optional[Tuple[float, float]]:
    return ArithmeticPricingCalculator(model, fp).theta1_window(mc, state)


def forward_asymptotic(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                       T: ArrayLike) -> ArrayLike:
    return ArithmeticPricingCalculator(model, fp).forward_asymptotic(mc, state, T)


def swap_price(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
               T1: float, T2: float) -> float:
    return ArithmeticPricingCalculator(model, fp).swap_price(mc, state, T1, T2)


def swap_risk_premium(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                      T1: float, T2: float) -> float:
    return ArithmeticPricingCalculator(model, fp).swap_risk_premium(mc, state, T1, T2)


def premium_curve(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                  taus) -> CurveResult:
    return ArithmeticPricingCalculator(model, fp).premium_curve(mc, state, taus)

# calculations/geometric_pricing.py
"""
Геометрическая модель спот-цены S = Λ_g·exp(X + Y).

Форвард под Q экспоненциально-аффинен:
    F_Q(t,T) = Λ_g(T)·exp(X e^{-aτ} + (μ_X + θ₁)τ·eta(aτ) + σ²τ/2·eta(2aτ) + YΨ¹(τ) + Ψ⁰(τ)),
где a = α_X(1 - β₁), а (Ψ⁰, Ψ¹) - решение уравнений Риккати. При β₂ = 0
Ψ¹ = e^{-α_Yτ} и Ψ⁰ выражается квадратурой кумулянты (случай Эсшера).

Знак премии совпадает со знаком Σ(t,τ) = log(F_Q/E_P), который
раскладывается на пять слагаемых (GeomPremiumDecomposition).
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import integrate
from scipy.special import expi

from config import DEFAULT_DELTA, EULER_GAMMA, QUAD_LIMIT, QUAD_RELTOL, RICCATI_DECAY_FLOOR
from calculations.affine_riccati import (
    CASE1,
    CASE3,
    RiccatiSolution,
    classify,
    solve_riccati,
)
from calculations.arithmetic_pricing import CurveResult, MarketState, lambda_fn
from calculations.exceptions import BlowUp, DomainError, WrongCase
from calculations.levy_models import DiracModel, LevyModel
from calculations.measure_change import FactorParams, MeasureChange, eta

logger = logging.getLogger(__name__)

# Ниже - степенной ряд для Ei(z) - log z - γ
EI_SERIES_THRESHOLD = 1.0
# expi переполняется при z > ~709
EI_Z_MAX = 700.0
EI_SERIES_TERMS = 60

SIGMA_TERM_NAMES = ("base", "spike", "theta1", "variance", "psi0")


# ==================== Экспоненциальный интеграл ====================

def exp_integral_Ei(z):
    """
    Ei(z) = ∫_{-∞}^z eᵗ/t dt для z > 0.

    Raises:
        DomainError: z ≤ 0
    """
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0) or np.any(np.isnan(z_arr)):
        raise DomainError("Ei(z) вычисляется только для z > 0")
    value = expi(z_arr)
    if np.ndim(value) == 0:
        return float(value)
    return value


def ei_log_gamma(z):
    """
    Ei(z) - log z - γ = Σ_{k≥1} zᵏ/(k·k!) ≥ 0.

    При малых z - ряд (без вычитания близких чисел), иначе - через Ei.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z_arr <= 0):
        raise DomainError("Ei(z) - log z - γ вычисляется только для z > 0")
    result = np.zeros(z_arr.shape)
    low = z_arr < EI_SERIES_THRESHOLD
    high = ~low

    if np.any(low):
        zl = z_arr[low]
        term = zl.copy()
        total = zl.copy()
        for k in range(2, EI_SERIES_TERMS):
            # t_k = t_{k-1}·z·(k-1)/k²
            term = term * zl * (k - 1) / (k * k)
            total = total + term
            if np.all(term < 1e-17 * total):
                break
        result[low] = total
    if np.any(high):
        zh = z_arr[high]
        result[high] = expi(zh) - np.log(zh) - EULER_GAMMA

    if np.ndim(z) == 0:
        return float(result[0])
    return result


def scaled_ei(z: float) -> float:
    """e^{-z}·Ei(z); выше EI_Z_MAX - асимптотический ряд Σ k!/z^{k+1}."""
    if z <= EI_Z_MAX:
        return float(expi(z) * math.exp(-z))
    term = 1.0 / z
    total = term
    for k in range(1, EI_SERIES_TERMS):
        term *= k / z
        total += term
        if term < 1e-17 * total:
            break
    return total


def _ei_levy_integral(model: LevyModel, theta2: float) -> float:
    """
    ∫(e^{θ₂z} - 1)(Ei(z) - log z - γ) ℓ(dz).

    На хвосте z ≥ 1 экспоненты собираются в e^{θz}ℓ(z), чтобы
    произведение не переполнялось; для модели Дирака - значение в атоме.
    """
    if isinstance(model, DiracModel):
        return float(math.expm1(theta2 * model.a) * ei_log_gamma(model.a))

    def head(z):
        return math.expm1(theta2 * z) * ei_log_gamma(z) * model.levy_density(z)

    def tail(z):
        jumps = model.tilted_levy_density(z, theta2) - model.levy_density(z)
        ei_part = (model.tilted_levy_density(z, 1.0 + theta2) - model.tilted_levy_density(z, 1.0)) * scaled_ei(z)
        return ei_part - jumps * (math.log(z) + EULER_GAMMA)

    near, _ = integrate.quad(head, 0.0, 1.0, epsabs=0.0, epsrel=QUAD_RELTOL, limit=QUAD_LIMIT)
    far, _ = integrate.quad(tail, 1.0, np.inf, epsabs=0.0, epsrel=QUAD_RELTOL, limit=QUAD_LIMIT)
    return near + far


def _cumulative_integral(func, taus) -> np.ndarray:
    """∫₀^τ func(s) ds для каждого τ (квадратура по соседним узлам и накопление)."""
    tau_arr = np.atleast_1d(np.asarray(taus, dtype=float))
    nodes = np.unique(np.concatenate([[0.0], tau_arr]))
    pieces = [0.0]
    for left, right in zip(nodes[:-1], nodes[1:]):
        value, _ = integrate.quad(func, left, right, epsabs=0.0, epsrel=QUAD_RELTOL, limit=QUAD_LIMIT)
        pieces.append(value)
    cumulative = np.cumsum(pieces)
    return cumulative[np.searchsorted(nodes, tau_arr)]


# ==================== Результаты ====================

@dataclass(frozen=True)
class GeomPremiumDecomposition:
    """Σ(t,τ) и его слагаемые."""

    sigma_total: float
    terms: Dict[str, float]


@dataclass(frozen=True)
class SigmaLimits:
    """Предел Σ на бесконечности, наклон в нуле и оценка вклада хвоста."""

    limit_infinity: float
    slope_at_zero: float
    tail_estimate: float = 0.0


@dataclass(frozen=True)
class EiInequality:
    """0 < ∫(e^{θ₂z}-1)(Ei(z)-log z-γ)ℓ(dz) < (α_Y/α_X)∫(e^{θ₂z}-1)(e^z-1)ℓ(dz)."""

    lower: float
    middle: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower < self.middle < self.upper


@dataclass(frozen=True)
class GeomThetaWindow:
    """
    Интервал θ₁ с положительным коротким и отрицательным длинным концом
    (β₁ = 0) и достаточное условие его непустоты V₊ > V₋.
    """

    lower: float
    upper: float
    v_plus: float
    v_minus: float

    @property
    def is_empty(self) -> bool:
        return self.lower >= self.upper

    @property
    def sufficient(self) -> bool:
        return self.v_plus > self.v_minus


# ==================== Калькулятор ====================

class GeometricPricingCalculator:
    """Калькулятор геометрической модели."""

    def __init__(self, model: LevyModel, fp: FactorParams, delta: float = DEFAULT_DELTA):
        if not model.domains().geometric_admissible:
            raise DomainError(f"Геометрическая модель требует Θ_L > 1, получено Θ_L = {model.theta_max}")
        self.model = model
        self.fp = fp
        self.delta = delta
        self.logger = logging.getLogger(__name__)

    # --- Слагаемые показателя экспоненты ---

    def _jump_integral(self, tau, theta2: float = 0.0) -> np.ndarray:
        """∫₀^τ [κ(e^{-α_Y s} + θ₂) - κ(θ₂)] ds."""
        kappa_theta = self.model.cumulant(theta2, 0)
        alpha_y = self.fp.alpha_y
        return _cumulative_integral(
            lambda s: self.model.cumulant(math.exp(-alpha_y * s) + theta2, 0) - kappa_theta, tau
        )

    def _x_exponent(self, mc: MeasureChange, state: MarketState, tau: np.ndarray) -> np.ndarray:
        a = self.fp.alpha_x * (1.0 - mc.beta1)
        return (state.x * np.exp(-a * tau) + (self.fp.mu_x + mc.theta1) * tau * eta(a * tau)
                + 0.5 * self.fp.sigma_x ** 2 * tau * eta(2.0 * a * tau))

    def _psi(self, mc: MeasureChange, tau: np.ndarray,
             sol: Optional[RiccatiSolution]) -> Tuple[np.ndarray, np.ndarray]:
        """(Ψ¹, Ψ⁰) на сетке τ: явная форма Эсшера при β₂ = 0 без решения, иначе решение Риккати."""
        if sol is None:
            if mc.beta2 == 0.0:
                mc.require_geometric(self.model, self.delta)
                psi1 = np.exp(-self.fp.alpha_y * tau)
                psi0 = self.fp.mu_y * tau * eta(self.fp.alpha_y * tau) + self._jump_integral(tau, mc.theta2)
                return psi1, psi0
            sol = solve_riccati(self.model, self.fp, mc, float(np.max(tau)) if np.max(tau) > 0 else 1.0,
                                t_eval=list(np.atleast_1d(tau)), delta=self.delta)
        self._check_solution(mc, sol)
        psi1, psi0 = sol.at(tau)
        return np.asarray(psi1, dtype=float), np.asarray(psi0, dtype=float)

    def _check_solution(self, mc: MeasureChange, sol: RiccatiSolution) -> None:
        if sol.theta2 != mc.theta2 or sol.beta2 != mc.beta2:
            raise DomainError("Решение Риккати получено для других θ₂, β₂")
        if sol.case_tag == CASE3:
            raise BlowUp(f"Case3: Ψ¹ взрывается при t_∞ = {sol.t_infinity}; цена не вычисляется",
                         sol.t_infinity if sol.t_infinity is not None else sol.horizon, sol)

    def _log_expected(self, state: MarketState, tau: np.ndarray) -> np.ndarray:
        fp = self.fp
        return (self._x_exponent(MeasureChange(), state, tau)
                + state.y * np.exp(-fp.alpha_y * tau) + fp.mu_y * tau * eta(fp.alpha_y * tau)
                + self._jump_integral(tau))

    # --- Цены ---

    def expected_spot_P_geom(self, state: MarketState, T):
        """E_P[S(T)|F_t] = Λ_g(T)·exp(...); внутренний интеграл по ℓ - кумулянта κ(e^{-α_Y s})."""
        tau = np.atleast_1d(state.time_to_maturity(T))
        self.fp.seasonality.require_positive(T)
        value = self.fp.seasonality(T) * np.exp(self._log_expected(state, tau))
        return _squeeze(value, T)

    def forward_price_geom(self, mc: MeasureChange, state: MarketState, T,
                           sol: Optional[RiccatiSolution] = None):
        """
        F_Q(t,T) по экспоненциально-аффинной формуле.

        Raises:
            BlowUp: решение Case3
            DomainError: решение для другой меры или горизонт мал
        """
        tau = np.atleast_1d(state.time_to_maturity(T))
        self.fp.seasonality.require_positive(T)
        psi1, psi0 = self._psi(mc, tau, sol)
        exponent = self._x_exponent(mc, state, tau) + state.y * psi1 + psi0
        return _squeeze(self.fp.seasonality(T) * np.exp(exponent), T)

    def forward_price_geom_esscher(self, mc: MeasureChange, state: MarketState, T):
        """Явная форма Эсшера для компоненты выбросов (β₂ = 0), без ОДУ."""
        if mc.beta2 != 0.0:
            raise DomainError("Явная форма Эсшера требует β₂ = 0")
        return self.forward_price_geom(mc, state, T, sol=None)

    def risk_premium_geom(self, mc: MeasureChange, state: MarketState, T,
                          sol: Optional[RiccatiSolution] = None):
        """R^F_g(t,T) = F_Q - E_P."""
        forward = np.atleast_1d(self.forward_price_geom(mc, state, T, sol))
        expected = np.atleast_1d(self.expected_spot_P_geom(state, T))
        return _squeeze(forward - expected, T)

    # --- Σ(t,τ) ---

    def _sigma_terms(self, mc: MeasureChange, state: MarketState, tau: np.ndarray,
                     sol: Optional[RiccatiSolution]) -> Dict[str, np.ndarray]:
        fp = self.fp
        a = fp.alpha_x * (1.0 - mc.beta1)
        psi1, psi0 = self._psi(mc, tau, sol)
        return {
            "base": state.x * np.exp(-fp.alpha_x * tau) * np.expm1(fp.alpha_x * mc.beta1 * tau),
            "spike": state.y * (psi1 - np.exp(-fp.alpha_y * tau)),
            "theta1": (fp.mu_x + mc.theta1) * tau * eta(a * tau) - fp.mu_x * tau * eta(fp.alpha_x * tau),
            "variance": fp.sigma_x ** 2 / (4.0 * fp.alpha_x) * lambda_fn(2.0 * fp.alpha_x * tau, 1.0 - mc.beta1),
            "psi0": psi0 - fp.mu_y * tau * eta(fp.alpha_y * tau) - self._jump_integral(tau),
        }

    def _require_limit_conditions(self, mc: MeasureChange) -> None:
        if self.fp.mu_x != 0.0 or self.fp.mu_y != 0.0:
            raise DomainError("Разложение Σ определено только при μ_X = μ_Y = 0")
        if not self.fp.alpha_x < self.fp.alpha_y:
            raise DomainError("Разложение Σ требует α_X < α_Y")
        mc.require_geometric(self.model, self.delta)

    def sigma_fn(self, mc: MeasureChange, state: MarketState, tau: float,
                 sol: Optional[RiccatiSolution] = None) -> GeomPremiumDecomposition:
        """
        Σ(t,τ) с разложением на слагаемые; знак Σ совпадает со знаком премии.

        Raises:
            DomainError: μ ≠ 0 или α_X ≥ α_Y
            WrongCase: решение не Case1
        """
        self._require_limit_conditions(mc)
        if sol is not None and sol.case_tag != CASE1:
            raise WrongCase(f"Разложение Σ требует решения Case1, получено {sol.case_tag}")
        if sol is None and mc.beta2 != 0.0:
            case_tag = classify(self.model, self.fp, mc, self.delta).case_tag
            if case_tag != CASE1:
                raise WrongCase(f"Разложение Σ требует Case1, получено {case_tag}")
        terms = {name: float(np.atleast_1d(value)[0])
                 for name, value in self._sigma_terms(mc, state,
                                                      np.atleast_1d(float(tau)), sol).items()}
        return GeomPremiumDecomposition(sigma_total=float(sum(terms.values())), terms=terms)

    def sigma_limits(self, mc: MeasureChange, state: MarketState,
                     sol: Optional[RiccatiSolution] = None) -> SigmaLimits:
        """
        Предел Σ при τ → ∞ и наклон в нуле.

        Интеграл ∫₀^∞ [κ(Ψ¹+θ₂) - κ(θ₂) - κ(e^{-α_Y t})]dt берется до t_max, где
        Ψ¹ < 1e-12, хвост добавляется аналитически по линейному приближению κ.
        """
        self._require_limit_conditions(mc)
        if mc.beta1 >= 1.0:
            raise DomainError("При β₁ = 1 предел Σ на бесконечности расходится")
        model, fp = self.model, self.fp
        classification = classify(model, fp, mc, self.delta)
        if classification.case_tag != CASE1:
            raise WrongCase(f"Предел Σ определен только для Case1, получено {classification.case_tag}")

        kappa1 = model.cumulant(mc.theta2, 1)
        kappa2 = model.cumulant(mc.theta2, 2)
        jump_slope = model.cumulant(1.0 + mc.theta2, 1) - kappa1
        slope = (state.x * fp.alpha_x * mc.beta1 + state.y * fp.alpha_y * mc.beta2 * jump_slope / kappa2
                 + mc.theta1 + model.cumulant(1.0 + mc.theta2, 0) - model.cumulant(mc.theta2, 0)
                 - model.cumulant(1.0, 0))

        rate = fp.alpha_y * (1.0 - mc.beta2)
        t_max = math.log(1.0 / RICCATI_DECAY_FLOOR) / rate
        if sol is not None and sol.horizon >= t_max:
            self._check_solution(mc, sol)
            t_max = sol.horizon
        elif mc.beta2 != 0.0:
            sol = solve_riccati(model, fp, mc, t_max, t_eval=[t_max], delta=self.delta)
        else:
            sol = None
        psi1_end, psi0_end = self._psi(mc, np.array([t_max]), sol)
        body = float(psi0_end[0] - self._jump_integral(np.array([t_max]))[0])
        tail = float(kappa1 * psi1_end[0] / rate - model.cumulant(0.0, 1) * math.exp(-fp.alpha_y * t_max)
                     / fp.alpha_y)

        limit = (mc.theta1 / (fp.alpha_x * (1.0 - mc.beta1))
                 + fp.sigma_x ** 2 * mc.beta1 / (4.0 * fp.alpha_x * (1.0 - mc.beta1))
                 + body + tail)
        self.logger.debug("Предел Σ: t_max = %.6g, хвост %.3e", t_max, tail)
        return SigmaLimits(limit_infinity=float(limit), slope_at_zero=float(slope), tail_estimate=abs(tail))

    def esscher_sigma_limit(self, mc: MeasureChange) -> float:
        """Предел Σ при β̄ = 0: θ₁/α_X + α_Y⁻¹∫(e^{θ₂z} - 1)(Ei(z) - log z - γ) ℓ(dz)."""
        if not mc.is_esscher:
            raise DomainError("Предел через Ei определен только при β̄ = (0, 0)")
        self._require_limit_conditions(mc)
        theta2 = mc.theta2
        integral = _ei_levy_integral(self.model, theta2)
        return mc.theta1 / self.fp.alpha_x + integral / self.fp.alpha_y

    def ei_inequality_terms(self, theta2: float) -> EiInequality:
        """Члены цепочки неравенств с экспоненциальным интегралом."""
        MeasureChange(theta2=theta2).require_geometric(self.model, self.delta)
        model = self.model
        middle = _ei_levy_integral(model, theta2)
        # ∫(e^{θz}-1)(e^z-1)ℓ(dz) = κ(1+θ) - κ(θ) - κ(1)
        cross = model.cumulant(1.0 + theta2, 0) - model.cumulant(theta2, 0) - model.cumulant(1.0, 0)
        return EiInequality(lower=0.0, middle=float(middle),
                            upper=float(self.fp.alpha_y / self.fp.alpha_x * cross))

    def theta1_window_geom(self, mc: MeasureChange, state: MarketState,
                           sol: Optional[RiccatiSolution] = None) -> GeomThetaWindow:
        """
        θ₁, при которых Σ'(0) > 0 и lim Σ < 0 (β₁ = 0), и оценки V₊, V₋.

        V₋ конечна только при β₂ ниже достаточной границы; иначе V₋ = ∞.
        """
        if mc.beta1 != 0.0:
            raise DomainError("Окно θ₁ для геометрической модели определено при β₁ = 0")
        model, fp = self.model, self.fp
        base = self.sigma_limits(MeasureChange(0.0, mc.theta2, 0.0, mc.beta2), state, sol)
        lower = -base.slope_at_zero
        upper = -fp.alpha_x * base.limit_infinity

        kappa_jump = model.cumulant(1.0 + mc.theta2, 0) - model.cumulant(mc.theta2, 0)
        ratio = (model.cumulant(1.0 + mc.theta2, 1) - model.cumulant(mc.theta2, 1)) / model.cumulant(mc.theta2, 2)
        v_plus = kappa_jump + fp.alpha_x / fp.alpha_y * model.cumulant(mc.theta2, 1) + state.y * fp.alpha_y * mc.beta2
        damping = 1.0 - mc.beta2 * ratio
        if damping > 0:
            v_minus = fp.alpha_x / fp.alpha_y * kappa_jump / damping + model.cumulant(1.0, 0)
        else:
            v_minus = math.inf
        return GeomThetaWindow(lower=float(lower), upper=float(upper), v_plus=float(v_plus), v_minus=float(v_minus))

    # --- Кривые и свопы ---

    def premium_curve_geom(self, mc: MeasureChange, state: MarketState, taus,
                           sol: Optional[RiccatiSolution] = None) -> CurveResult:
        """
        Кривая премии, Σ, форварда и ожидаемого спота.

        Raises:
            WrongCase: параметры Case3 (кривая не строится)
        """
        taus = np.asarray(taus, dtype=float)
        classification = classify(self.model, self.fp, mc, self.delta)
        if classification.case_tag == CASE3:
            raise WrongCase(
                f"Case3: u* = {classification.u_star:.6f} < 1, граница β₂ = {classification.beta_bound:.6f}; "
                f"геометрическая кривая не строится"
            )
        if sol is None and mc.beta2 != 0.0:
            sol = solve_riccati(self.model, self.fp, mc, float(taus[-1]), t_eval=list(taus), delta=self.delta)
        maturities = state.t + taus
        forward = np.atleast_1d(self.forward_price_geom(mc, state, maturities, sol))
        expected = np.atleast_1d(self.expected_spot_P_geom(state, maturities))
        terms = self._sigma_terms(mc, state, taus, sol)
        sigma = sum(np.asarray(terms[name], dtype=float) for name in SIGMA_TERM_NAMES)
        premium = forward - expected
        method = "closed_form" if sol is None else "ode"
        self.logger.info("Геометрическая кривая: %d точек, %s, метод %s", taus.size, classification.case_tag, method)
        return CurveResult(
            taus=taus,
            values=premium,
            columns={"risk_premium": premium, "sigma": sigma, "forward": forward, "expected_spot": expected},
            meta={"model": str(self.model), "spot_model": "geom", "measure": mc.to_dict(), "method": method,
                  "case": classification.case_tag, "u_star": classification.u_star},
        )

    def swap_risk_premium_geom(self, mc: MeasureChange, state: MarketState, T1: float, T2: float,
                               sol: Optional[RiccatiSolution] = None, n_points: int = 501) -> float:
        """Среднее премии по периоду поставки [T1, T2] (правило Симпсона)."""
        if not state.t < T1 < T2:
            raise DomainError(f"Период поставки должен удовлетворять t < T1 < T2, получено t={state.t}, "
                              f"T1={T1}, T2={T2}")
        grid = np.linspace(T1, T2, n_points)
        if sol is None and mc.beta2 != 0.0:
            sol = solve_riccati(self.model, self.fp, mc, float(T2 - state.t), t_eval=list(grid - state.t),
                                delta=self.delta)
        premium = np.atleast_1d(self.risk_premium_geom(mc, state, grid, sol))
        return float(integrate.simpson(premium, x=grid) / (T2 - T1))


def _squeeze(value, T):
    if np.ndim(T) == 0:
        return float(np.atleast_1d(value)[0])
    return value


# --- Функциональный интерфейс ---

def expected_spot_P_geom(model: LevyModel, fp: FactorParams, state: MarketState, T):
    return GeometricPricingCalculator(model, fp).expected_spot_P_geom(state, T)


def forward_price_geom(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState, T,
                       sol: Optional[RiccatiSolution] = None):
    return GeometricPricingCalculator(model, fp).forward_price_geom(mc, state, T, sol)


def forward_price_geom_esscher(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState, T):
    return GeometricPricingCalculator(model, fp).forward_price_geom_esscher(mc, state, T)


def risk_premium_geom(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState, T,
                      sol: Optional[RiccatiSolution] = None):
    return GeometricPricingCalculator(model, fp).risk_premium_geom(mc, state, T, sol)


def sigma_fn(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState, tau: float,
             sol: Optional[RiccatiSolution] = None) -> GeomPremiumDecomposition:
    return GeometricPricingCalculator(model, fp).sigma_fn(mc, state, tau, sol)


def sigma_limits(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                 sol: Optional[RiccatiSolution] = None) -> SigmaLimits:
    return GeometricPricingCalculator(model, fp).sigma_limits(mc, state, sol)


def esscher_sigma_limit(model: LevyModel, fp: FactorParams, mc: MeasureChange) -> float:
    return GeometricPricingCalculator(model, fp).esscher_sigma_limit(mc)


def ei_inequality_terms(model: LevyModel, fp: FactorParams, theta2: float) -> EiInequality:
    return GeometricPricingCalculator(model, fp).ei_inequality_terms(theta2)


def theta1_window_geom(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                       sol: Optional[RiccatiSolution] = None) -> GeomThetaWindow:
    return GeometricPricingCalculator(model, fp).theta1_window_geom(mc, state, sol)


def premium_curve_geom(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState, taus,
                       sol: Optional[RiccatiSolution] = None) -> CurveResult:
    return GeometricPricingCalculator(model, fp).premium_curve_geom(mc, state, taus, sol)


def swap_risk_premium_geom(model: LevyModel, fp: FactorParams, mc: MeasureChange, state: MarketState,
                           T1: float, T2: float, sol: Optional[RiccatiSolution] = None) -> float:
    return GeometricPricingCalculator(model, fp).swap_risk_premium_geom(mc, state, T1, T2, sol)

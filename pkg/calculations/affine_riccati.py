# calculations/affine_riccati.py
"""
Обобщенные уравнения Риккати для компоненты выбросов под Q.

Показатели Леви аффинного процесса Y под Q:
    Λ₀(u) = μ_Y·u + κ(u + θ₂) - κ(θ₂),
    Λ₁(u) = -α_Y·u + k·(κ'(u + θ₂) - κ'(θ₂)),   k = α_Y·β₂/κ''(θ₂).

Система dΨ¹/dt = Λ₁(Ψ¹), Ψ¹(0) = 1; dΨ⁰/dt = Λ₀(Ψ¹), Ψ⁰(0) = 0 дает
E_Q[exp(Y(T)) | F_t] = exp(Y(t)Ψ¹(T-t) + Ψ⁰(T-t)).

Поведение определяется положительным нулем u* поля Λ₁:
    Case1 (u* > 1) - решение глобально, Ψ¹ убывает к нулю;
    Case2 (u* = 1) - Ψ¹ ≡ 1, Ψ⁰ линейна;
    Case3 (u* < 1) - взрыв за конечное время t_∞.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicHermiteSpline

from config import (
    CASE2_TOLERANCE,
    DEFAULT_DELTA,
    QUAD_LIMIT,
    QUAD_RELTOL,
    RICCATI_GUARD,
    RICCATI_INFINITE_CAP,
    RICCATI_TOLERANCE,
    U_STAR_TOLERANCE,
)
from calculations.exceptions import BlowUp, DomainError, UnsupportedModel, WrongCase
from calculations.levy_models import CompoundPoissonExpModel, LevyModel
from calculations.measure_change import FactorParams, MeasureChange
from calculations.runge_kutta import RKF45Integrator

logger = logging.getLogger(__name__)

CASE1 = "Case1"
CASE2 = "Case2"
CASE3 = "Case3"

# Максимум удвоений при поиске правой границы вилки для u*
_BRACKET_DOUBLINGS = 200


@dataclass(frozen=True)
class LevyExponents:
    lam0: float
    lam1: float


@dataclass(frozen=True)
class Classification:
    """Случай поведения решения, корень u* и достаточная граница для β₂."""

    case_tag: str
    u_star: float
    beta_bound: float


@dataclass
class RiccatiSolution:
    """
    Решение (Ψ¹, Ψ⁰) на сетке t_grid.

    В случае Case3 сетка обрывается у границы области, truncated = True,
    а divergence_suspected сигнализирует о возможной бесконечности предела Ψ⁰.
    """

    t_grid: np.ndarray
    psi1: np.ndarray
    psi0: np.ndarray
    case_tag: str
    u_star: float
    t_infinity: Optional[float] = None
    dpsi1: Optional[np.ndarray] = None
    dpsi0: Optional[np.ndarray] = None
    theta2: float = 0.0
    beta2: float = 0.0
    truncated: bool = False
    divergence_suspected: bool = False
    n_steps: int = 0
    _splines: Optional[Tuple[CubicHermiteSpline, CubicHermiteSpline]] = field(default=None, repr=False)

    @property
    def horizon(self) -> float:
        return float(self.t_grid[-1])

    def at(self, tau) -> Tuple[np.ndarray, np.ndarray]:
        """
        Значения (Ψ¹(τ), Ψ⁰(τ)).

        В узлах сетки - точные значения интегратора, между узлами -
        кубическая интерполяция Эрмита по значениям полей.

        Raises:
            BlowUp: τ за точкой обрыва решения Case3
            DomainError: τ < 0 или τ за горизонтом решения
        """
        tau_arr = np.asarray(tau, dtype=float)
        if np.any(tau_arr < 0):
            raise DomainError("τ должно быть неотрицательным")
        if np.any(tau_arr > self.horizon * (1.0 + 1e-12)):
            if self.truncated:
                raise BlowUp(f"Решение Ψ¹ существует только до t = {self.horizon:.6g}", self.horizon, self)
            raise DomainError(f"τ выходит за горизонт решения {self.horizon:.6g}")
        if self._splines is None:
            self._splines = (
                CubicHermiteSpline(self.t_grid, self.psi1, self.dpsi1),
                CubicHermiteSpline(self.t_grid, self.psi0, self.dpsi0),
            )
        flat = np.atleast_1d(tau_arr)
        idx = np.clip(np.searchsorted(self.t_grid, flat), 0, self.t_grid.size - 1)
        exact = np.isclose(self.t_grid[idx], flat, rtol=0.0, atol=1e-12)
        psi1 = np.where(exact, self.psi1[idx], self._splines[0](flat))
        psi0 = np.where(exact, self.psi0[idx], self._splines[1](flat))
        if tau_arr.ndim == 0:
            return float(psi1[0]), float(psi0[0])
        return psi1.reshape(tau_arr.shape), psi0.reshape(tau_arr.shape)


class RiccatiField:
    """Векторное поле (Λ₁, Λ₀) для заданных модели, факторов и меры."""

    def __init__(self, model: LevyModel, fp: FactorParams, mc: MeasureChange):
        mc.require_arithmetic(model)
        self.model = model
        self.fp = fp
        self.mc = mc
        self.kappa_theta = model.cumulant(mc.theta2, 0)
        self.kappa1_theta = model.cumulant(mc.theta2, 1)
        self.k = fp.alpha_y * mc.beta2 / model.cumulant(mc.theta2, 2)
        # Граница области Ψ¹: u + θ₂ < Θ_L
        self.boundary = model.theta_max - mc.theta2

    def lam0(self, u):
        return self.fp.mu_y * u + self.model.cumulant(u + self.mc.theta2, 0) - self.kappa_theta

    def lam1(self, u):
        return -self.fp.alpha_y * u + self.k * (self.model.cumulant(u + self.mc.theta2, 1) - self.kappa1_theta)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return np.array([self.lam1(y[0]), self.lam0(y[0])])


def levy_exponents(model: LevyModel, fp: FactorParams, mc: MeasureChange, u: float) -> LevyExponents:
    """
    Λ₀(u), Λ₁(u).

    Raises:
        DomainError: u + θ₂ ≥ Θ_L
    """
    riccati_field = RiccatiField(model, fp, mc)
    return LevyExponents(lam0=float(riccati_field.lam0(u)), lam1=float(riccati_field.lam1(u)))


def u_star(model: LevyModel, fp: FactorParams, mc: MeasureChange, delta: float = DEFAULT_DELTA) -> float:
    """
    Единственный положительный нуль Λ₁ на (0, Θ_L - θ₂).

    Λ₁ выпукла, Λ₁(0) = 0 и Λ₁'(0) = -α_Y(1 - β₂) < 0, поэтому Λ₁(u)/u
    отрицательна до u* и положительна после: вилка расширяется к границе,
    затем корень уточняется методом Брента.

    Raises:
        DomainError: β₂ ∈ {0, 1} или θ₂ ∉ D_L^g(δ)
    """
    if mc.beta2 <= 0.0 or mc.beta2 >= 1.0:
        raise DomainError(f"u* определен только при β₂ ∈ (0, 1), получено β₂ = {mc.beta2}")
    mc.require_geometric(model, delta)
    riccati_field = RiccatiField(model, fp, mc)
    boundary = riccati_field.boundary

    def scaled(u):
        return riccati_field.lam1(u) / u

    lower = 1e-6 * min(1.0, boundary)
    if scaled(lower) >= 0:
        raise DomainError("Поле Λ₁ неотрицательно у нуля: проверьте β₂ < 1")

    upper = None
    for j in range(1, _BRACKET_DOUBLINGS):
        candidate = boundary * (1.0 - 2.0 ** -j) if math.isfinite(boundary) else 2.0 ** (j - 1)
        if candidate <= lower:
            continue
        logger.debug("Вилка u*: [%.6g, %.6g]", lower, candidate)
        if scaled(candidate) > 0:
            upper = candidate
            break
        lower = candidate
    if upper is None:
        raise DomainError("Не удалось найти правую границу вилки для u*")

    root = optimize.brentq(scaled, lower, upper, xtol=U_STAR_TOLERANCE)
    return float(root)


def cpexp_roots(model: LevyModel, theta2: float, beta2: float) -> Tuple[float, float, float]:
    """
    Нули поля Λ₁ для сложного пуассоновского процесса с экспоненциальными
    скачками: u₀ = 0, u∓ = ((λ-θ₂)/4)(4 - β₂ ∓ √(β₂² + 8β₂)).
    """
    if not isinstance(model, CompoundPoissonExpModel):
        raise UnsupportedModel(f"Замкнутые корни доступны только для cpexp, получено {model.kind}")
    if theta2 >= model.lam:
        raise DomainError(f"theta2 вне области экспоненциальных моментов: θ₂ = {theta2}")
    m = model.lam - theta2
    root = math.sqrt(beta2 ** 2 + 8.0 * beta2)
    return 0.0, m / 4.0 * (4.0 - beta2 - root), m / 4.0 * (4.0 - beta2 + root)


def cpexp_beta2_bound(model: LevyModel, theta2: float) -> float:
    """Точная граница β₂ < 2(λ-θ₂-1)²/((λ-θ₂)(2(λ-θ₂)-1)), при которой u₋ > 1."""
    if not isinstance(model, CompoundPoissonExpModel):
        raise UnsupportedModel(f"Граница β₂ в замкнутой форме доступна только для cpexp, получено {model.kind}")
    m = model.lam - theta2
    if not m > 1.0:
        raise DomainError(f"Требуется λ - θ₂ > 1, получено {m}")
    return 2.0 * (m - 1.0) ** 2 / (m * (2.0 * m - 1.0))


def classify(model: LevyModel, fp: FactorParams, mc: MeasureChange, delta: float = DEFAULT_DELTA) -> Classification:
    """
    Классификация по u*: Case1 при u* > 1, Case2 при |u* - 1| < 1e-10, иначе Case3.

    β₂ = 0 относится к Case1 (u* = Θ_L - θ₂), β₂ = 1 - к Case3 (u* = 0).

    Raises:
        DomainError: Θ_L ≤ 1 или θ₂ ∉ D_L^g(δ)
    """
    mc.require_geometric(model, delta)
    kappa2 = model.cumulant(mc.theta2, 2)
    beta_bound = kappa2 / (model.cumulant(1.0 + mc.theta2, 1) - model.cumulant(mc.theta2, 1))

    if mc.beta2 == 0.0:
        root = model.theta_max - mc.theta2
    elif mc.beta2 == 1.0:
        root = 0.0
    else:
        root = u_star(model, fp, mc, delta)

    if abs(root - 1.0) < CASE2_TOLERANCE:
        case_tag = CASE2
    elif root > 1.0:
        case_tag = CASE1
    else:
        case_tag = CASE3

    if mc.beta2 < beta_bound and case_tag != CASE1:
        logger.warning("β₂ = %.6g ниже достаточной границы %.6g, но случай %s", mc.beta2, beta_bound, case_tag)
    logger.info("Классификация: %s, u* = %.10g, граница β₂ = %.10g", case_tag, root, beta_bound)
    return Classification(case_tag=case_tag, u_star=float(root), beta_bound=float(beta_bound))


def _truncation_level(riccati_field: RiccatiField, guard: float) -> float:
    if math.isfinite(riccati_field.boundary):
        return riccati_field.boundary * (1.0 - guard)
    return RICCATI_INFINITE_CAP


def _divergence_suspected(riccati_field: RiccatiField, u_trunc: float) -> bool:
    """
    Признак возможной расходимости предела Ψ⁰ = ∫ Λ₀/Λ₁ du.

    Для конечной границы - отношение не убывает к границе; для Θ_L = ∞ -
    подынтегральная функция убывает медленнее 1/u.
    """
    u_mid = 0.5 * (1.0 + u_trunc)

    def ratio(u):
        return riccati_field.lam0(u) / riccati_field.lam1(u)

    if math.isfinite(riccati_field.boundary):
        return bool(ratio(u_trunc) >= ratio(u_mid))
    return bool(u_trunc * ratio(u_trunc) >= u_mid * ratio(u_mid))


def _closed_form_case2(riccati_field: RiccatiField, classification: Classification, horizon: float,
                       t_eval: Optional[Sequence[float]]) -> RiccatiSolution:
    """Ψ¹ ≡ 1, Ψ⁰(t) = (μ_Y + κ(1 + θ₂) - κ(θ₂))·t."""
    slope = float(riccati_field.lam0(1.0))
    grid = np.unique(np.concatenate([[0.0, horizon], np.asarray(t_eval or [], dtype=float)]))
    grid = grid[(grid >= 0.0) & (grid <= horizon)]
    return RiccatiSolution(
        t_grid=grid,
        psi1=np.ones_like(grid),
        psi0=slope * grid,
        case_tag=CASE2,
        u_star=classification.u_star,
        dpsi1=np.zeros_like(grid),
        dpsi0=np.full_like(grid, slope),
        theta2=riccati_field.mc.theta2,
        beta2=riccati_field.mc.beta2,
    )


def solve_riccati(model: LevyModel, fp: FactorParams, mc: MeasureChange, horizon: float,
                  tol: float = RICCATI_TOLERANCE, t_eval: Optional[Sequence[float]] = None,
                  guard: float = RICCATI_GUARD, fixed_step: Optional[float] = None,
                  delta: float = DEFAULT_DELTA) -> RiccatiSolution:
    """
    Решает систему для (Ψ¹, Ψ⁰) на [0, horizon].

    Args:
        tol: Допуск локальной ошибки на шаг
        t_eval: Времена, в которые сетка попадает точно
        guard: Относительная ширина полосы у границы Θ_L - θ₂ для Case3
        fixed_step: Постоянный шаг (без адаптации)

    Raises:
        BlowUp: Case3 и горизонт за временем выхода; несет усеченное решение
        DomainError: ошибки classify
    """
    classification = classify(model, fp, mc, delta)
    riccati_field = RiccatiField(model, fp, mc)
    if classification.case_tag == CASE2 and fixed_step is None:
        return _closed_form_case2(riccati_field, classification, horizon, t_eval)

    u_trunc = _truncation_level(riccati_field, guard)
    # Ψ¹ - относительный контроль, Ψ⁰ - смешанный
    integrator = RKF45Integrator(rtol=tol, atol=np.array([1e-300, tol]), fixed_step=fixed_step)
    result = integrator.integrate(
        riccati_field,
        [1.0, 0.0],
        horizon,
        t_eval=t_eval,
        admissible=lambda y: bool(np.isfinite(y[0]) and y[0] < u_trunc),
    )
    if mc.theta2 + float(np.max(result.y[:, 0])) >= model.theta_max:
        raise DomainError("Нарушено условие интегрируемости: θ₂ + max Ψ¹ ≥ Θ_L")

    t_infinity = None
    suspected = False
    if classification.case_tag == CASE3:
        t_infinity = blow_up_time(model, fp, mc, delta)
        suspected = _divergence_suspected(riccati_field, u_trunc)
        if suspected:
            logger.warning("Case3: предел Ψ⁰ при t → t_∞ может быть бесконечным")

    solution = RiccatiSolution(
        t_grid=result.t,
        psi1=result.y[:, 0],
        psi0=result.y[:, 1],
        case_tag=classification.case_tag,
        u_star=classification.u_star,
        t_infinity=t_infinity,
        dpsi1=result.dydt[:, 0],
        dpsi0=result.dydt[:, 1],
        theta2=mc.theta2,
        beta2=mc.beta2,
        truncated=result.truncated,
        divergence_suspected=suspected,
        n_steps=result.n_steps,
    )
    logger.info("Riccati %s: %d шагов до t = %.6g", solution.case_tag, result.n_steps, result.t_final)
    if result.truncated:
        raise BlowUp(
            f"Ψ¹ покидает область определения при t = {result.t_final:.10g} < горизонта {horizon:g}",
            result.t_final,
            solution,
        )
    return solution


def blow_up_time(model: LevyModel, fp: FactorParams, mc: MeasureChange, delta: float = DEFAULT_DELTA) -> float:
    """
    t_∞ = ∫₁^{Θ_L-θ₂} du / Λ₁(u).

    Замена v = 1/(Θ_L - θ₂ - u) для конечной границы и v = e^{-u} для Θ_L = ∞.

    Raises:
        WrongCase: случай не Case3
    """
    classification = classify(model, fp, mc, delta)
    if classification.case_tag != CASE3:
        raise WrongCase(f"Время взрыва определено только для Case3, получено {classification.case_tag}")
    riccati_field = RiccatiField(model, fp, mc)
    boundary = riccati_field.boundary

    if math.isfinite(boundary):
        def integrand(v):
            u = boundary - 1.0 / v
            if u + mc.theta2 >= model.theta_max:
                return 0.0
            return 1.0 / (riccati_field.lam1(u) * v * v)

        value, abserr = integrate.quad(integrand, 1.0 / (boundary - 1.0), np.inf,
                                       epsabs=0.0, epsrel=QUAD_RELTOL, limit=QUAD_LIMIT)
    else:
        def integrand(v):
            if v <= 0.0:
                return 0.0
            with np.errstate(over="ignore"):
                return 1.0 / (riccati_field.lam1(-math.log(v)) * v)

        value, abserr = integrate.quad(integrand, 0.0, math.exp(-1.0),
                                       epsabs=0.0, epsrel=QUAD_RELTOL, limit=QUAD_LIMIT)
    logger.debug("t_∞ = %.12g (оценка ошибки %.2e)", value, abserr)
    return float(value)


def exponential_rate(solution: RiccatiSolution, t: float) -> float:
    """
    Секущая оценка скорости убывания: (log Ψ¹(t) - log Ψ¹(t/2)) / (t/2).

    Для Case1 стремится к -α_Y(1 - β₂).
    """
    if solution.case_tag != CASE1:
        raise WrongCase(f"Скорость убывания Ψ¹ определена только для Case1, получено {solution.case_tag}")
    psi_t, _ = solution.at(t)
    psi_half, _ = solution.at(t / 2.0)
    return float((math.log(psi_t) - math.log(psi_half)) / (t / 2.0))

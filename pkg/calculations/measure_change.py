# calculations/measure_change.py
"""
Замена меры Q_{θ̄,β̄}, сохраняющая структуру OU-факторов.

Ядра плотности:
    G(x)    = (θ₁ + α_X·β₁·x) / σ_X                          - броуновская часть;
    H(y, z) = e^{θ₂z}·(1 + α_Y·β₂·z·y / κ''(θ₂))              - компенсатор скачков;
    M(y, z) = e^{θ₂z}·(1 + α_Y·β₂·y / κ'(θ₂))                  - альтернатива для конечной активности.

Под Q уровень дрейфа X сдвигается на θ₁, Y - на κ'(θ₂), а скорости возврата
умножаются на (1 - β₁) и (1 - β₂). При β₁ = 1 фактор X - броуновское движение
со сносом μ_X + θ₁.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np

from config import ETA_SERIES_THRESHOLD
from calculations.exceptions import DomainError, UnsupportedModel
from calculations.levy_models import LevyModel
from calculations.seasonality import Seasonality

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def eta(x: ArrayLike) -> ArrayLike:
    """
    eta(x) = (1 - e^{-x}) / x, eta(0) = 1.

    Ряд Тейлора при |x| < 1e-4 убирает деление 0/0 при β → 1.
    """
    x_arr = np.asarray(x, dtype=float)
    small = np.abs(x_arr) < ETA_SERIES_THRESHOLD
    safe = np.where(small, 1.0, x_arr)
    with np.errstate(over="ignore"):
        direct = -np.expm1(-safe) / safe
    series = 1.0 - x_arr / 2.0 + x_arr ** 2 / 6.0 - x_arr ** 3 / 24.0
    value = np.where(small, series, direct)
    if value.ndim == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class FactorParams:
    """
    Параметры факторов под исторической мерой P.

    mu_x, alpha_x, sigma_x, x0 - базовая компонента X (единицы цены, 1/день, ед./√день);
    mu_y, alpha_y, y0 - компонента выбросов Y; seasonality - Λ_a или Λ_g.
    """

    mu_x: float = 0.0
    alpha_x: float = 0.099
    sigma_x: float = 0.0158
    x0: float = 0.0
    mu_y: float = 0.0
    alpha_y: float = 0.3466
    y0: float = 0.0
    seasonality: Seasonality = field(default_factory=lambda: Seasonality.constant(0.0))

    def __post_init__(self):
        if not self.alpha_x > 0:
            raise DomainError(f"alpha_x должно быть больше 0, получено {self.alpha_x}")
        if not self.alpha_y > 0:
            raise DomainError(f"alpha_y должно быть больше 0, получено {self.alpha_y}")
        if not self.sigma_x > 0:
            raise DomainError(f"sigma_x должно быть больше 0, получено {self.sigma_x}")
        if self.mu_y < 0:
            raise DomainError(f"mu_y должно быть неотрицательным, получено {self.mu_y}")
        if self.y0 < 0:
            raise DomainError(f"y0 должно быть неотрицательным, получено {self.y0}")


@dataclass(frozen=True)
class MeasureChange:
    """Параметры замены меры θ̄ = (θ₁, θ₂), β̄ = (β₁, β₂) ∈ [0, 1]²."""

    theta1: float = 0.0
    theta2: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} должно лежать в [0, 1], получено {value}")
        for name in ("theta1", "theta2"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} должно быть конечным числом")

    @property
    def is_identity(self) -> bool:
        """Q = P тогда и только тогда, когда все параметры равны нулю."""
        return self.theta1 == 0.0 and self.theta2 == 0.0 and self.beta1 == 0.0 and self.beta2 == 0.0

    @property
    def is_esscher(self) -> bool:
        """β̄ = (0, 0): меняется только уровень возврата."""
        return self.beta1 == 0.0 and self.beta2 == 0.0

    def require_arithmetic(self, model: LevyModel) -> None:
        """
        Raises:
            DomainError: θ₂ ∉ D_L
        """
        domains = model.domains()
        if not domains.in_d_l(self.theta2):
            raise DomainError(f"theta2 вне D_L: θ₂ = {self.theta2}, D_L = (-∞, {domains.d_l[1]})")

    def require_geometric(self, model: LevyModel, delta: float = 0.0) -> None:
        """
        Raises:
            DomainError: Θ_L ≤ 1 или θ₂ ∉ D_L^g(δ)
        """
        domains = model.domains()
        if not domains.geometric_admissible:
            raise DomainError(f"Геометрическая модель требует Θ_L > 1, получено Θ_L = {domains.theta_max}")
        if not domains.in_d_l_g(self.theta2, delta):
            raise DomainError(
                f"theta2 вне D_L^g: θ₂ = {self.theta2}, D_L^g(δ={delta}) = (-∞, {domains.d_l_g_delta(delta)[1]})"
            )

    def to_dict(self) -> dict:
        return {"theta": [self.theta1, self.theta2], "beta": [self.beta1, self.beta2]}


@dataclass(frozen=True)
class FactorParamsQ:
    """
    Параметры факторов под мерой Q.

    mu_x = μ_X + θ₁, alpha_x = α_X(1 - β₁); mu_y = μ_Y + κ'(θ₂), alpha_y = α_Y(1 - β₂).
    x_brownian - случай β₁ = 1 (X - броуновское движение со сносом mu_x).
    """

    mu_x: float
    alpha_x: float
    sigma_x: float
    mu_y: float
    alpha_y: float
    x_brownian: bool
    y_nonstationary: bool
    seasonality: Seasonality

    def x_mean(self, x0: ArrayLike, tau: ArrayLike) -> ArrayLike:
        """E[X(t+τ) | X(t) = x0]."""
        tau = np.asarray(tau, dtype=float)
        return x0 * np.exp(-self.alpha_x * tau) + self.mu_x * tau * eta(self.alpha_x * tau)

    def x_variance(self, tau: ArrayLike) -> ArrayLike:
        """Var[X(t+τ) | F_t] = σ²(1 - e^{-2aτ})/(2a) = σ²·τ·eta(2aτ)."""
        tau = np.asarray(tau, dtype=float)
        return self.sigma_x ** 2 * tau * eta(2.0 * self.alpha_x * tau)

    def y_mean(self, y0: ArrayLike, tau: ArrayLike) -> ArrayLike:
        """E[Y(t+τ) | Y(t) = y0]."""
        tau = np.asarray(tau, dtype=float)
        return y0 * np.exp(-self.alpha_y * tau) + self.mu_y * tau * eta(self.alpha_y * tau)


def kernel_G(fp: FactorParams, mc: MeasureChange, x: ArrayLike) -> ArrayLike:
    """G = σ_X⁻¹(θ₁ + α_X·β₁·x)."""
    value = (mc.theta1 + fp.alpha_x * mc.beta1 * np.asarray(x, dtype=float)) / fp.sigma_x
    if value.ndim == 0:
        return float(value)
    return value


def kernel_H(model: LevyModel, fp: FactorParams, mc: MeasureChange, y: ArrayLike, z: ArrayLike) -> ArrayLike:
    """
    H = e^{θ₂z}(1 + α_Y·β₂·z·y / κ''(θ₂)), строго положительно при y ≥ 0.

    Raises:
        DomainError: θ₂ ∉ D_L, y < 0 или z ≤ 0
    """
    mc.require_arithmetic(model)
    y_arr = np.asarray(y, dtype=float)
    z_arr = np.asarray(z, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError("y должно быть неотрицательным")
    if np.any(z_arr <= 0):
        raise DomainError("z должно быть больше 0")
    k = fp.alpha_y * mc.beta2 / model.cumulant(mc.theta2, 2)
    value = np.exp(mc.theta2 * z_arr) * (1.0 + k * z_arr * y_arr)
    if np.ndim(value) == 0:
        return float(value)
    return value


def kernel_M(model: LevyModel, fp: FactorParams, mc: MeasureChange, y: ArrayLike, z: ArrayLike) -> ArrayLike:
    """
    M = e^{θ₂z}(1 + α_Y·β₂·y / κ'(θ₂)); только для конечной активности.

    Raises:
        UnsupportedModel: бесконечная активность
        DomainError: θ₂ ∉ D_L, y < 0 или z ≤ 0
    """
    if not model.is_finite_activity:
        raise UnsupportedModel(f"Ядро M не определено для бесконечной активности ({model.kind})")
    mc.require_arithmetic(model)
    y_arr = np.asarray(y, dtype=float)
    z_arr = np.asarray(z, dtype=float)
    if np.any(y_arr < 0):
        raise DomainError("y должно быть неотрицательным")
    if np.any(z_arr <= 0):
        raise DomainError("z должно быть больше 0")
    value = np.exp(mc.theta2 * z_arr) * (1.0 + fp.alpha_y * mc.beta2 * y_arr / model.cumulant(mc.theta2, 1))
    if np.ndim(value) == 0:
        return float(value)
    return value


def compensator_drift(model: LevyModel, fp: FactorParams, mc: MeasureChange, y: ArrayLike) -> ArrayLike:
    """∫ z(H - 1) ℓ(dz) = κ'(θ₂) - κ'(0) + α_Y·β₂·y."""
    return model.cumulant(mc.theta2, 1) - model.cumulant(0.0, 1) + fp.alpha_y * mc.beta2 * np.asarray(y)


def compensator_mass(model: LevyModel, fp: FactorParams, mc: MeasureChange, y: ArrayLike) -> ArrayLike:
    """∫ (H - 1) ℓ(dz) = κ(θ₂) + α_Y·β₂·κ'(θ₂)/κ''(θ₂)·y."""
    k = fp.alpha_y * mc.beta2 / model.cumulant(mc.theta2, 2)
    return model.cumulant(mc.theta2, 0) + k * model.cumulant(mc.theta2, 1) * np.asarray(y)


def q_jump_intensity(model: LevyModel, fp: FactorParams, mc: MeasureChange,
                     kernel: str = "H") -> Tuple[float, float]:
    """
    Интенсивность скачков под Q: A + B·y.

    Для ядра H: A = ∫e^{θ₂z}ℓ(dz), B = α_Yβ₂κ'(θ₂)/κ''(θ₂) (размеры - смесь
    наклоненного и взвешенного по z распределений).
    Для ядра M: A тот же, B = A·α_Yβ₂/κ'(θ₂) (размеры только наклоненные).

    Raises:
        UnsupportedModel: бесконечная активность или неизвестное ядро
    """
    if not model.is_finite_activity:
        raise UnsupportedModel(f"Интенсивность скачков бесконечна для модели {model.kind}")
    base = model.cumulant(mc.theta2, 0) + model.jump_mass()
    if kernel == "H":
        return base, fp.alpha_y * mc.beta2 * model.cumulant(mc.theta2, 1) / model.cumulant(mc.theta2, 2)
    if kernel == "M":
        return base, base * fp.alpha_y * mc.beta2 / model.cumulant(mc.theta2, 1)
    raise UnsupportedModel(f"Неизвестное ядро замены меры: {kernel}")


def q_dynamics(model: LevyModel, fp: FactorParams, mc: MeasureChange) -> FactorParamsQ:
    """
    Параметры X и Y под Q_{θ̄,β̄}.

    Raises:
        DomainError: θ₂ ∉ D_L
    """
    mc.require_arithmetic(model)
    fq = FactorParamsQ(
        mu_x=fp.mu_x + mc.theta1,
        alpha_x=fp.alpha_x * (1.0 - mc.beta1),
        sigma_x=fp.sigma_x,
        mu_y=fp.mu_y + model.cumulant(mc.theta2, 1),
        alpha_y=fp.alpha_y * (1.0 - mc.beta2),
        x_brownian=mc.beta1 == 1.0,
        y_nonstationary=mc.beta2 == 1.0,
        seasonality=fp.seasonality,
    )
    if fq.x_brownian:
        logger.info("β₁ = 1: X под Q - броуновское движение со сносом %.6g", fq.mu_x)
    return fq

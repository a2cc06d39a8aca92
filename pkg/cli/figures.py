# cli/figures.py
"""
Встроенные сценарии профилей премии за риск.

Все сценарии используют базовый набор параметров: α_X = 0.099,
α_Y = 0.3466, σ_X = 0.0158, мера Леви 0.4·e^{-2z}, μ_X = μ_Y = 0,
τ ∈ [0, 360] дней.
"""
from dataclasses import dataclass
from typing import Tuple

from config import (
    FIGURE_N_POINTS,
    FIGURE_TAU_MAX,
    BASE_ALPHA_X,
    BASE_ALPHA_Y,
    BASE_LEVY_C,
    BASE_LEVY_LAMBDA,
    BASE_SIGMA_X,
)
from calculations.arithmetic_pricing import MarketState
from calculations.exceptions import ScenarioError
from calculations.levy_models import CompoundPoissonExpModel
from calculations.measure_change import FactorParams, MeasureChange
from cli.scenario import CurveGrid, Scenario, default_seasonality


@dataclass(frozen=True)
class FigureSetup:
    spot_model: str
    theta: Tuple[float, float]
    beta: Tuple[float, float]
    x: float
    y: float
    caption: str


def _arith(theta, beta, x, y, caption):
    return FigureSetup("arith", theta, beta, x, y, caption)


def _geom(theta, beta, x, y, caption):
    return FigureSetup("geom", theta, beta, x, y, caption)


FIGURES = {
    # Арифметическая модель, преобразование Эсшера
    "beta0-1a": _arith((0.075, 0.0), (0.0, 0.0), 0.0, 0.0, "θ₁=0.075, θ₂=0: премия положительна"),
    "beta0-1b": _arith((-0.075, 0.0), (0.0, 0.0), 0.0, 0.0, "θ₁=-0.075, θ₂=0: премия отрицательна"),
    "beta0-1c": _arith((0.0, 0.75), (0.0, 0.0), 0.0, 0.0, "θ₁=0, θ₂=0.75: премия положительна"),
    "beta0-1d": _arith((0.0, -0.75), (0.0, 0.0), 0.0, 0.0, "θ₁=0, θ₂=-0.75: премия отрицательна"),
    "beta0-2a": _arith((-0.1, 0.95), (0.0, 0.0), 0.0, 0.0, "θ₁=-0.1, θ₂=0.95: + на коротком конце, - на длинном"),
    "beta0-2b": _arith((0.02, -0.95), (0.0, 0.0), 0.0, 0.0, "θ₁=0.02, θ₂=-0.95: - на коротком конце, + на длинном"),
    "beta0-2c": _arith((-0.05, 0.95), (0.0, 0.0), 0.0, 0.0, "θ₁=-0.05, θ₂=0.95: постоянный знак"),
    "beta0-2d": _arith((-0.075, 0.15), (0.0, 0.0), 0.0, 0.0, "θ₁=-0.075, θ₂=0.15: постоянный знак"),
    # Арифметическая модель, только изменение скорости возврата
    "theta0-3a": _arith((0.0, 0.0), (0.25, 0.75), 2.5, 2.5, "β₁=0.25, β₂=0.75, X=2.5, Y=2.5"),
    "theta0-3b": _arith((0.0, 0.0), (0.75, 0.0), -2.5, 2.5, "β₁=0.75, β₂=0, X=-2.5, Y=2.5"),
    "theta0-3c": _arith((0.0, 0.0), (0.75, 0.75), -2.5, 0.0, "β₁=0.75, β₂=0.75, X=-2.5, Y=0"),
    "theta0-3d": _arith((0.0, 0.0), (0.5, 0.5), -2.5, 2.5, "β₁=0.5, β₂=0.5, X=-2.5, Y=2.5"),
    # Арифметическая модель, общий случай (профиль не зависит от X)
    "general-4a": _arith((-0.5, 0.5), (0.0, 0.88), 0.0, 5.0, "β₁=0, β₂=0.88, θ₁=-0.5, θ₂=0.5, Y=5"),
    # Геометрическая модель, преобразование Эсшера
    "beta0-5a": _geom((-0.3, 0.9), (0.0, 0.0), -0.5, 0.5, "θ₁=-0.3, θ₂=0.9, X=-0.5, Y=0.5"),
    "beta0-5b": _geom((0.03, -0.9), (0.0, 0.0), 0.5, 0.5, "θ₁=0.03, θ₂=-0.9, X=0.5, Y=0.5"),
    "beta0-5c": _geom((-0.09, 0.9), (0.0, 0.0), -0.5, 0.5, "θ₁=-0.09, θ₂=0.9, X=-0.5, Y=0.5"),
    "beta0-5d": _geom((-0.2, 0.1), (0.0, 0.0), 0.5, 0.5, "θ₁=-0.2, θ₂=0.1, X=0.5, Y=0.5"),
    # Геометрическая модель, только изменение скорости возврата
    "theta0-6a": _geom((0.0, 0.0), (0.4, 0.2), 1.0, 0.5, "β₁=0.4, β₂=0.2, X=1.0, Y=0.5"),
    "theta0-6b": _geom((0.0, 0.0), (0.75, 0.0), -2.5, 0.5, "β₁=0.75, β₂=0, X=-2.5, Y=0.5"),
    "theta0-6c": _geom((0.0, 0.0), (0.75, 0.3), -2.5, 0.0, "β₁=0.75, β₂=0.3, X=-2.5, Y=0"),
    "theta0-6d": _geom((0.0, 0.0), (0.5, 0.2), -2.5, 2.5, "β₁=0.5, β₂=0.2, X=-2.5, Y=2.5"),
    # Геометрическая модель, общий случай
    "general-7a": _geom((-0.1, 0.2), (0.0, 0.2), 1.0, 1.0, "β₁=0, β₂=0.2, θ₁=-0.1, θ₂=0.2, X=1, Y=1"),
}


def list_figures():
    """Идентификаторы встроенных сценариев в порядке объявления."""
    return list(FIGURES)


def base_factors(x0: float = 0.0, y0: float = 0.0, spot_model: str = "arith") -> FactorParams:
    return FactorParams(
        mu_x=0.0, alpha_x=BASE_ALPHA_X, sigma_x=BASE_SIGMA_X, x0=x0,
        mu_y=0.0, alpha_y=BASE_ALPHA_Y, y0=y0,
        seasonality=default_seasonality(spot_model),
    )


def figure_scenario(fig_id: str) -> Scenario:
    """
    Сценарий встроенного профиля.

    Raises:
        ScenarioError: неизвестный идентификатор
    """
    if fig_id not in FIGURES:
        raise ScenarioError(f"Неизвестный профиль {fig_id!r}. Доступны: {', '.join(FIGURES)}")
    setup = FIGURES[fig_id]
    return Scenario(
        model=CompoundPoissonExpModel(c=BASE_LEVY_C, lam=BASE_LEVY_LAMBDA),
        factors=base_factors(setup.x, setup.y, setup.spot_model),
        measure=MeasureChange(theta1=setup.theta[0], theta2=setup.theta[1],
                              beta1=setup.beta[0], beta2=setup.beta[1]),
        state=MarketState(t=0.0, x=setup.x, y=setup.y),
        grid=CurveGrid(tau_min=0.0, tau_max=FIGURE_TAU_MAX, n_points=FIGURE_N_POINTS),
        spot_model=setup.spot_model,
        description=f"{fig_id}: {setup.caption}",
    )

# calculations/levy_models.py
"""
Субординатор L, управляющий компонентой выбросов Y.

Три варианта меры Леви ℓ:
- Dirac(a): скачки только размера a, ℓ = δ_a;
- CompoundPoissonExp(c, λ): ℓ(dz) = c·e^{-λz} dz, интенсивность c/λ;
- TemperedStable(c, λ, α): ℓ(dz) = c·z^{-1-α}·e^{-λz} dz, α ∈ [0, 1).

Кумулянта κ_L(θ) = ∫(e^{θz} - 1) ℓ(dz) и производные κ^{(n)}(θ) = ∫ zⁿe^{θz} ℓ(dz)
вычисляются в замкнутой форме; квадратура определяющего интеграла
оставлена как независимая проверка.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import integrate
from scipy.special import gamma

from config import QUAD_LIMIT, THETA_INFINITY
from calculations.exceptions import DomainError, UnsupportedModel

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

MAX_CUMULANT_ORDER = 3


@dataclass(frozen=True)
class PointMass:
    """Описание атома меры Леви (для модели Дирака)."""

    location: float
    weight: float = 1.0


@dataclass(frozen=True)
class ThetaDomains:
    """
    Допустимые области параметра θ.

    D_L = (-∞, Θ_L/2), D_L^g = (-∞, (Θ_L-1)∧(Θ_L/2)),
    D_L^g(δ) = (-∞, (Θ_L-1-δ)∧(Θ_L/2)). Граница Θ_L/2 не включается.
    """

    theta_max: float

    @property
    def d_l(self) -> Tuple[float, float]:
        return (-math.inf, self.theta_max / 2.0)

    @property
    def d_l_g(self) -> Tuple[float, float]:
        return self.d_l_g_delta(0.0)

    def d_l_g_delta(self, delta: float) -> Tuple[float, float]:
        """Область D_L^g(δ) для геометрической модели."""
        if delta < 0:
            raise DomainError(f"δ должно быть неотрицательным, получено {delta}")
        upper = min(self.theta_max - 1.0 - delta, self.theta_max / 2.0)
        return (-math.inf, upper)

    @property
    def geometric_admissible(self) -> bool:
        """Геометрическая модель требует Θ_L > 1."""
        return self.theta_max > 1.0

    def in_d_l(self, theta: float) -> bool:
        return theta < self.d_l[1]

    def in_d_l_g(self, theta: float, delta: float = 0.0) -> bool:
        return theta < self.d_l_g_delta(delta)[1]


class LevyModel(ABC):
    """Базовый класс субординатора с конечным первым моментом."""

    kind = "abstract"

    @property
    @abstractmethod
    def theta_max(self) -> float:
        """Граница экспоненциальных моментов Θ_L (math.inf для Дирака)."""

    @property
    @abstractmethod
    def is_finite_activity(self) -> bool:
        """Конечна ли полная масса ℓ((0, ∞))."""

    @abstractmethod
    def jump_mass(self) -> float:
        """Полная масса меры Леви ℓ((0, ∞))."""

    @abstractmethod
    def _cumulant(self, theta: np.ndarray, order: int) -> np.ndarray:
        """Замкнутая форма κ^{(order)}(θ) без проверок области."""

    @abstractmethod
    def levy_density(self, z: float):
        """Плотность ℓ в точке z > 0."""

    @abstractmethod
    def to_dict(self) -> dict:
        """Описание модели для файла сценария."""

    def domains(self) -> ThetaDomains:
        return ThetaDomains(self.theta_max)

    def cumulant(self, theta: ArrayLike, order: int = 0) -> ArrayLike:
        """
        Кумулянта κ_L и её производные.

        Args:
            theta: Точка (или массив точек) θ < Θ_L
            order: Порядок производной 0..3

        Returns:
            κ_L^{(order)}(θ), скаляр для скалярного θ

        Raises:
            DomainError: θ ≥ Θ_L или порядок вне 0..3
        """
        if not isinstance(order, (int, np.integer)) or not 0 <= order <= MAX_CUMULANT_ORDER:
            raise DomainError(f"Порядок кумулянты должен быть целым от 0 до {MAX_CUMULANT_ORDER}, получено {order}")
        theta_arr = np.asarray(theta, dtype=float)
        if np.any(theta_arr >= self.theta_max) or np.any(np.isnan(theta_arr)):
            raise DomainError(
                f"theta вне области экспоненциальных моментов: требуется θ < Θ_L = {self.theta_max}"
            )
        value = self._cumulant(theta_arr, order)
        if np.ndim(value) == 0:
            return float(value)
        return value

    def quad_cumulant(self, theta: float, order: int = 0) -> float:
        """
        Квадратура определяющего интеграла Леви (проверочный оракул).

        Args:
            theta: Точка θ < Θ_L
            order: Порядок производной

        Returns:
            ∫(e^{θz} - 1) ℓ(dz) при order = 0, иначе ∫ zⁿ e^{θz} ℓ(dz)
        """
        if theta >= self.theta_max:
            raise DomainError(f"theta вне области экспоненциальных моментов: θ = {theta} ≥ Θ_L = {self.theta_max}")

        def integrand(z):
            if order == 0:
                if z < 1.0:
                    return math.expm1(theta * z) * self.levy_density(z)
                return self.tilted_levy_density(z, theta) - self.levy_density(z)
            return z ** order * self.tilted_levy_density(z, theta)

        head, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-12, limit=QUAD_LIMIT)
        tail, _ = integrate.quad(integrand, 1.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=QUAD_LIMIT)
        return head + tail

    def tilted_levy_density(self, z: float, theta: float) -> float:
        """e^{θz}·ℓ(z) для θ < Θ_L без переполнения при больших z."""
        return math.exp(theta * z) * self.levy_density(z)

    def sample_sizes(self, rng: np.random.Generator, n: int, theta: float = 0.0,
                     size_biased: bool = False) -> np.ndarray:
        """
        Размеры скачков с плотностью ∝ z^k·e^{θz}·ℓ(dz), k = 1 при size_biased.

        Raises:
            UnsupportedModel: для бесконечной активности
        """
        raise UnsupportedModel(f"Моделирование скачков не поддерживается для модели {self.kind}")

    def __str__(self):
        params = ", ".join(f"{k}={v}" for k, v in self.to_dict().items() if k != "type")
        return f"{self.kind}({params})"


@dataclass(frozen=True, eq=True)
class DiracModel(LevyModel):
    """Скачки фиксированного размера a: ℓ = δ_a, Θ_L = ∞."""

    a: float = 1.0
    kind = "dirac"

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"Размер скачка a должен быть больше 0, получено {self.a}")

    @property
    def theta_max(self) -> float:
        return THETA_INFINITY

    @property
    def is_finite_activity(self) -> bool:
        return True

    def jump_mass(self) -> float:
        return 1.0

    def _cumulant(self, theta, order):
        if order == 0:
            return np.expm1(self.a * theta)
        return self.a ** order * np.exp(self.a * theta)

    def levy_density(self, z):
        if z <= 0:
            raise DomainError(f"z должно быть больше 0, получено {z}")
        return PointMass(self.a, 1.0)

    def quad_cumulant(self, theta, order=0):
        # Интеграл по атому - значение в точке a
        if order == 0:
            return math.expm1(theta * self.a)
        return self.a ** order * math.exp(theta * self.a)

    def sample_sizes(self, rng, n, theta=0.0, size_biased=False):
        return np.full(n, self.a)

    def to_dict(self):
        return {"type": self.kind, "a": self.a}


@dataclass(frozen=True, eq=True)
class CompoundPoissonExpModel(LevyModel):
    """Сложный пуассоновский процесс: интенсивность c/λ, скачки Exp(λ)."""

    c: float = 0.4
    lam: float = 2.0
    kind = "cpexp"

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"Масштаб c должен быть больше 0, получено {self.c}")
        if not self.lam > 0:
            raise DomainError(f"Параметр λ должен быть больше 0, получено {self.lam}")

    @property
    def theta_max(self) -> float:
        return self.lam

    @property
    def is_finite_activity(self) -> bool:
        return True

    def jump_mass(self) -> float:
        return self.c / self.lam

    def _cumulant(self, theta, order):
        if order == 0:
            return self.c * theta / (self.lam * (self.lam - theta))
        return self.c * math.factorial(order) / (self.lam - theta) ** (order + 1)

    def levy_density(self, z):
        if z <= 0:
            raise DomainError(f"z должно быть больше 0, получено {z}")
        return self.c * math.exp(-self.lam * z)

    def tilted_levy_density(self, z, theta):
        return self.c * math.exp((theta - self.lam) * z)

    def sample_sizes(self, rng, n, theta=0.0, size_biased=False):
        # e^{θz}·c·e^{-λz} - Exp(λ-θ); z·e^{θz}·c·e^{-λz} - Gamma(2, λ-θ)
        shape = 2.0 if size_biased else 1.0
        return rng.gamma(shape, 1.0 / (self.lam - theta), size=n)

    def to_dict(self):
        return {"type": self.kind, "c": self.c, "lambda": self.lam}


@dataclass(frozen=True, eq=True)
class TemperedStableModel(LevyModel):
    """Умеренно-устойчивый субординатор: ℓ(dz) = c·z^{-1-α}·e^{-λz} dz."""

    c: float = 1.0
    lam: float = 3.0
    alpha: float = 0.5
    kind = "tempered_stable"

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"Масштаб c должен быть больше 0, получено {self.c}")
        if not self.lam > 0:
            raise DomainError(f"Параметр λ должен быть больше 0, получено {self.lam}")
        if not 0.0 <= self.alpha < 1.0:
            raise DomainError(f"Индекс α должен лежать в [0, 1), получено {self.alpha}")

    @property
    def theta_max(self) -> float:
        return self.lam

    @property
    def is_finite_activity(self) -> bool:
        return False

    def jump_mass(self) -> float:
        return math.inf

    def _cumulant(self, theta, order):
        c, lam, alpha = self.c, self.lam, self.alpha
        if order == 0:
            if alpha == 0.0:
                # гамма-процесс: c·log(λ/(λ-θ))
                return -c * np.log1p(-theta / lam)
            # (λ-θ)^α - λ^α без потери точности около θ = 0
            return c * gamma(-alpha) * lam ** alpha * np.expm1(alpha * np.log1p(-theta / lam))
        return c * gamma(order - alpha) * (lam - theta) ** (alpha - order)

    def levy_density(self, z):
        if z <= 0:
            raise DomainError(f"z должно быть больше 0, получено {z}")
        return self.c * z ** (-1.0 - self.alpha) * math.exp(-self.lam * z)

    def tilted_levy_density(self, z, theta):
        if z <= 0:
            raise DomainError(f"z должно быть больше 0, получено {z}")
        return self.c * z ** (-1.0 - self.alpha) * math.exp((theta - self.lam) * z)

    def quad_cumulant(self, theta, order=0):
        if theta >= self.theta_max:
            raise DomainError(f"theta вне области экспоненциальных моментов: θ = {theta} ≥ Θ_L = {self.theta_max}")
        c, lam, alpha = self.c, self.lam, self.alpha

        # Особенность z^{-α} в нуле снимается весом 'alg'
        def regular(z):
            if order == 0:
                if z == 0.0:
                    return c * theta
                if z < 1.0:
                    return c * math.expm1(theta * z) / z * math.exp(-lam * z)
                return c * (math.exp((theta - lam) * z) - math.exp(-lam * z)) / z
            return c * z ** (order - 1) * math.exp((theta - lam) * z)

        head, _ = integrate.quad(regular, 0.0, 1.0, weight="alg", wvar=(-alpha, 0.0),
                                 epsabs=0.0, epsrel=1e-12, limit=QUAD_LIMIT)
        tail, _ = integrate.quad(lambda z: regular(z) * z ** (-alpha), 1.0, np.inf,
                                 epsabs=0.0, epsrel=1e-12, limit=QUAD_LIMIT)
        return head + tail

    def to_dict(self):
        return {"type": self.kind, "c": self.c, "lambda": self.lam, "alpha": self.alpha}


def cumulant(model: LevyModel, theta: ArrayLike, order: int = 0) -> ArrayLike:
    """κ_L^{(order)}(θ) для модели model."""
    return model.cumulant(theta, order)


def domains(model: LevyModel) -> ThetaDomains:
    """Области D_L, D_L^g модели."""
    return model.domains()


def levy_density(model: LevyModel, z: float):
    """Плотность меры Леви; для модели Дирака - описание атома."""
    return model.levy_density(z)

# calculations/montecarlo.py
"""
Моделирование Монте-Карло факторов X, Y под P и Q и плотностей 𝓔(G̃), 𝓔(H̃).

Пути обрабатываются блоками по MC_BLOCK_SIZE; блок b получает собственный
генератор Philox из SeedSequence(seed, spawn_key=(b,)), поэтому результат
не зависит от числа потоков.

Y моделируется событийно (прореживание Огаты): между скачками
dY = (μ_Y - α_Y·Y)dt под обеими мерами, интенсивность скачков A + B·Y(t-),
огибающая A + B·max(Y, μ_Y/α_Y) обновляется на сетке с шагом dt.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, Optional, Union

import numpy as np
from scipy import stats

from config import (
    MC_BLOCK_SIZE,
    MC_DEFAULT_DT,
    MC_DEFAULT_PATHS,
    MC_DEFAULT_SEED,
    MC_DENSITY_MAX_HORIZON,
    MC_EULER_DT,
    MC_MAX_DT_HALVINGS,
)
from calculations.affine_riccati import CASE3, classify
from calculations.arithmetic_pricing import MarketState
from calculations.exceptions import DomainError, EnvelopeViolation, UnsupportedModel, WrongCase
from calculations.levy_models import LevyModel
from calculations.measure_change import (
    FactorParams,
    FactorParamsQ,
    MeasureChange,
    eta,
    kernel_G,
    q_dynamics,
    q_jump_intensity,
)

logger = logging.getLogger(__name__)

SPOT_MODELS = ("arith", "geom")


@dataclass(frozen=True)
class SimConfig:
    """Параметры моделирования: число путей, шаг огибающей, seed, горизонт (дни)."""

    n_paths: int = MC_DEFAULT_PATHS
    dt: float = MC_DEFAULT_DT
    seed: int = MC_DEFAULT_SEED
    horizon: float = 30.0
    euler_dt: float = MC_EULER_DT
    workers: int = 1
    block_size: int = MC_BLOCK_SIZE

    def __post_init__(self):
        if self.n_paths < 1:
            raise DomainError(f"Число путей должно быть не меньше 1, получено {self.n_paths}")
        if not self.dt > 0 or not self.euler_dt > 0:
            raise DomainError("Шаг моделирования должен быть больше 0")
        if not self.horizon > 0:
            raise DomainError(f"Горизонт должен быть больше 0, получено {self.horizon}")
        if self.workers < 1 or self.block_size < 1:
            raise DomainError("Число потоков и размер блока должны быть положительными")


@dataclass(frozen=True)
class McEstimate:
    """Выборочное среднее и его стандартная ошибка sample_std/√n."""

    mean: float
    std_error: float
    n: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "McEstimate":
        samples = np.asarray(samples, dtype=float)
        n = samples.size
        std_error = float(np.std(samples, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean=float(np.mean(samples)), std_error=std_error, n=n)

    def z_score(self, target: float) -> float:
        """(mean - target)/SE; при нулевой ошибке - 0 или ±∞."""
        diff = self.mean - target
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error


@dataclass(frozen=True)
class DensityCheck:
    """Средние плотностей 𝓔(G̃)(T), 𝓔(H̃)(T); mean_G_half - то же при шаге dt/2."""

    mean_G: McEstimate
    mean_H: McEstimate
    mean_G_half: Optional[McEstimate] = None

    @property
    def richardson_G(self) -> Optional[float]:
        """Экстраполяция Ричардсона 2·m(dt/2) - m(dt)."""
        if self.mean_G_half is None:
            return None
        return 2.0 * self.mean_G_half.mean - self.mean_G.mean


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    p_value: float
    dof: int


# ==================== ГСЧ и блоки ====================

def block_rng(seed: int, block: int) -> np.random.Generator:
    """Независимый поток Philox для блока путей."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_blocks(cfg: SimConfig, work: Callable[[np.random.Generator, int], Dict[str, np.ndarray]]
                ) -> Dict[str, np.ndarray]:
    """Выполняет work по блокам и склеивает результаты в порядке блоков."""
    n_blocks = -(-cfg.n_paths // cfg.block_size)
    sizes = [min(cfg.block_size, cfg.n_paths - b * cfg.block_size) for b in range(n_blocks)]

    def run(block):
        return work(block_rng(cfg.seed, block), sizes[block])

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    else:
        parts = [run(block) for block in range(n_blocks)]
    return {key: np.concatenate([part[key] for part in parts]) for key in parts[0]}


# ==================== Базовая компонента X ====================

def _x_moments(params: Union[FactorParams, FactorParamsQ], x0: float, t: float):
    mean = x0 * math.exp(-params.alpha_x * t) + params.mu_x * t * eta(params.alpha_x * t)
    variance = params.sigma_x ** 2 * t * eta(2.0 * params.alpha_x * t)
    return mean, variance


def simulate_X(params: Union[FactorParams, FactorParamsQ], cfg: SimConfig, x0: Optional[float] = None,
               horizon: Optional[float] = None, return_paths: bool = False):
    """
    Точная выборка гауссовского перехода OU (при β₁ = 1 - броуновское
    приращение со сносом, через eta(0) = 1).

    Returns:
        Значения X(horizon) или (сетка, пути) при return_paths
    """
    if x0 is None:
        if not isinstance(params, FactorParams):
            raise DomainError("Для параметров под Q требуется явное X(t)")
        x0 = params.x0
    horizon = cfg.horizon if horizon is None else horizon

    if not return_paths:
        mean, variance = _x_moments(params, x0, horizon)
        std = math.sqrt(variance)

        def work(rng, n):
            return {"x": mean + std * rng.standard_normal(n)}

        return _run_blocks(cfg, work)["x"]

    n_steps = max(1, int(math.ceil(horizon / cfg.dt)))
    grid = np.linspace(0.0, horizon, n_steps + 1)
    h = horizon / n_steps
    decay = math.exp(-params.alpha_x * h)
    drift = params.mu_x * h * eta(params.alpha_x * h)
    step_std = params.sigma_x * math.sqrt(h * eta(2.0 * params.alpha_x * h))

    def work_paths(rng, n):
        paths = np.empty((n, n_steps + 1))
        paths[:, 0] = x0
        for j in range(n_steps):
            paths[:, j + 1] = paths[:, j] * decay + drift + step_std * rng.standard_normal(n)
        return {"paths": paths}

    return grid, _run_blocks(cfg, work_paths)["paths"]


# ==================== Компонента выбросов Y: прореживание ====================

@dataclass(frozen=True)
class _JumpLaw:
    """Интенсивность A + B·y и законы размеров скачков."""

    base_rate: float
    state_rate: float
    tilt: float
    state_size_biased: bool
    # (θ₂, k) для log H = θ₂z + log(1 + k·z·y) при моделировании под P
    density: Optional[tuple] = None


def _thinning_block(rng: np.random.Generator, n: int, model: LevyModel, alpha: float, mu: float,
                    y0: float, horizon: float, dt: float, law: _JumpLaw) -> Dict[str, np.ndarray]:
    """
    Событийное моделирование блока путей Y на [0, horizon].

    Возвращает Y(horizon), число и сумму скачков, ∫Y ds и Σ log H по скачкам.
    """
    level = mu / alpha
    y = np.full(n, float(y0))
    t = np.zeros(n)
    step = np.zeros(n, dtype=np.int64)
    count = np.zeros(n, dtype=np.int64)
    jump_sum = np.zeros(n)
    int_y = np.zeros(n)
    log_h = np.zeros(n)
    active = np.ones(n, dtype=bool)

    def flow(y_start, dur):
        # точное решение dY = (μ - αY)dt и интеграл ∫Y ds на отрезке dur
        y_end = level + (y_start - level) * np.exp(-alpha * dur)
        integral = level * dur + (y_start - level) * dur * eta(alpha * dur)
        return y_end, integral

    while np.any(active):
        idx = np.flatnonzero(active)
        ti, yi = t[idx], y[idx]
        boundary = np.minimum((step[idx] + 1) * dt, horizon)
        envelope = law.base_rate + law.state_rate * np.maximum(yi, level)
        candidate = ti + rng.exponential(1.0 / envelope)

        # кандидат за границей интервала: дрейф до границы и обновление огибающей
        cross = candidate >= boundary
        c_idx = idx[cross]
        if c_idx.size:
            y_end, integral = flow(yi[cross], boundary[cross] - ti[cross])
            y[c_idx] = y_end
            int_y[c_idx] += integral
            t[c_idx] = boundary[cross]
            step[c_idx] += 1
            active[c_idx[t[c_idx] >= horizon]] = False

        e_idx = idx[~cross]
        if not e_idx.size:
            continue
        y_pre, integral = flow(yi[~cross], candidate[~cross] - ti[~cross])
        int_y[e_idx] += integral
        t[e_idx] = candidate[~cross]
        y[e_idx] = y_pre

        env = envelope[~cross]
        intensity = law.base_rate + law.state_rate * y_pre
        if np.any(intensity > env * (1.0 + 1e-12)):
            raise EnvelopeViolation(f"Интенсивность скачков превысила огибающую при dt = {dt}", dt)
        accept = rng.random(e_idx.size) * env < intensity
        a_idx = e_idx[accept]
        if not a_idx.size:
            continue

        y_acc = y_pre[accept]
        from_state = rng.random(a_idx.size) * (law.base_rate + law.state_rate * y_acc) >= law.base_rate
        sizes = np.empty(a_idx.size)
        n_state = int(np.count_nonzero(from_state))
        if n_state < a_idx.size:
            sizes[~from_state] = model.sample_sizes(rng, a_idx.size - n_state, law.tilt, False)
        if n_state:
            sizes[from_state] = model.sample_sizes(rng, n_state, law.tilt, law.state_size_biased)

        if law.density is not None:
            theta2, k = law.density
            log_h[a_idx] += theta2 * sizes + np.log1p(k * sizes * y_acc)
        y[a_idx] = y_acc + sizes
        count[a_idx] += 1
        jump_sum[a_idx] += sizes

    return {"y": y, "count": count, "jump_sum": jump_sum, "int_y": int_y, "log_h": log_h}


def _simulate_thinning(model: LevyModel, fp: FactorParams, cfg: SimConfig, law: _JumpLaw,
                       y0: float, horizon: float) -> Dict[str, np.ndarray]:
    """Прореживание по всем блокам; при нарушении огибающей шаг dt делится пополам."""
    dt = cfg.dt
    for _ in range(MC_MAX_DT_HALVINGS):
        try:
            result = _run_blocks(
                cfg, lambda rng, n: _thinning_block(rng, n, model, fp.alpha_y, fp.mu_y, y0, horizon, dt, law)
            )
            logger.info("Прореживание: %d путей, горизонт %.6g, скачков в среднем %.4g",
                        cfg.n_paths, horizon, float(np.mean(result["count"])))
            return result
        except EnvelopeViolation as e:
            logger.warning("%s; шаг огибающей уменьшен до %.6g", e, e.dt / 2.0)
            dt = e.dt / 2.0
    raise EnvelopeViolation(f"Огибающая нарушена после {MC_MAX_DT_HALVINGS} делений шага", dt)


def _require_finite_activity(model: LevyModel) -> None:
    if not model.is_finite_activity:
        raise UnsupportedModel(f"Монте-Карло не поддерживается для бесконечной активности ({model.kind})")


def _p_law(model: LevyModel, density: Optional[tuple] = None) -> _JumpLaw:
    return _JumpLaw(base_rate=model.jump_mass(), state_rate=0.0, tilt=0.0, state_size_biased=False,
                    density=density)


def simulate_Y_P(model: LevyModel, fp: FactorParams, cfg: SimConfig, y0: Optional[float] = None,
                 horizon: Optional[float] = None, details: bool = False):
    """
    Y под P: пуассоновские скачки с интенсивностью ℓ((0,∞)), затухание между ними.

    Raises:
        UnsupportedModel: бесконечная активность
    """
    _require_finite_activity(model)
    result = _simulate_thinning(model, fp, cfg, _p_law(model),
                                fp.y0 if y0 is None else y0, cfg.horizon if horizon is None else horizon)
    return result if details else result["y"]


def simulate_Y_Q(model: LevyModel, fp: FactorParams, mc: MeasureChange, cfg: SimConfig,
                 y0: Optional[float] = None, horizon: Optional[float] = None, kernel: str = "H",
                 details: bool = False):
    """
    Y под Q: интенсивность A + B·Y(t-), размеры - смесь наклоненного
    (вес A) и взвешенного по z (вес B·y) распределений; для ядра M -
    только наклоненное.

    Raises:
        UnsupportedModel: бесконечная активность
        DomainError: θ₂ ∉ D_L
    """
    _require_finite_activity(model)
    mc.require_arithmetic(model)
    base_rate, state_rate = q_jump_intensity(model, fp, mc, kernel)
    law = _JumpLaw(base_rate=base_rate, state_rate=state_rate, tilt=mc.theta2,
                   state_size_biased=(kernel == "H"))
    result = _simulate_thinning(model, fp, cfg, law,
                                fp.y0 if y0 is None else y0, cfg.horizon if horizon is None else horizon)
    return result if details else result["y"]


# ==================== Плотности ====================

def _brownian_density_block(rng: np.random.Generator, n: int, fp: FactorParams, mc: MeasureChange,
                            horizon: float, h_target: float) -> Dict[str, np.ndarray]:
    """log 𝓔(G̃)(T) = Σ G(X_n)ΔW_n - ½ΣG(X_n)²h; X - точный шаг OU с тем же Z."""
    n_steps = max(1, int(math.ceil(horizon / h_target)))
    h = horizon / n_steps
    decay = math.exp(-fp.alpha_x * h)
    drift = fp.mu_x * h * eta(fp.alpha_x * h)
    step_std = fp.sigma_x * math.sqrt(h * eta(2.0 * fp.alpha_x * h))
    sqrt_h = math.sqrt(h)
    x = np.full(n, fp.x0)
    log_e = np.zeros(n)
    for _ in range(n_steps):
        # один Z для ΔW и шага OU: связь X и W верна с точностью схемы Эйлера
        z = rng.standard_normal(n)
        g = kernel_G(fp, mc, x)
        log_e += g * sqrt_h * z - 0.5 * g * g * h
        x = x * decay + drift + step_std * z
    return {"density": np.exp(log_e)}


def _jump_log_density(model: LevyModel, fp: FactorParams, mc: MeasureChange, cfg: SimConfig,
                      horizon: float) -> Dict[str, np.ndarray]:
    """log 𝓔(H̃)(T) = -∫(κ(θ₂) + kκ'(θ₂)Y)ds + Σ log H(Y(s-), ΔL(s)) под P."""
    _require_finite_activity(model)
    mc.require_arithmetic(model)
    k = fp.alpha_y * mc.beta2 / model.cumulant(mc.theta2, 2)
    result = _simulate_thinning(model, fp, cfg, _p_law(model, density=(mc.theta2, k)), fp.y0, horizon)
    compensator = model.cumulant(mc.theta2, 0) * horizon + k * model.cumulant(mc.theta2, 1) * result["int_y"]
    result["log_density"] = result["log_h"] - compensator
    return result


def density_martingale_check(model: LevyModel, fp: FactorParams, mc: MeasureChange, cfg: SimConfig,
                             richardson: bool = False) -> DensityCheck:
    """
    Проверка E_P[𝓔(G̃)(T)] = E_P[𝓔(H̃)(T)] = 1 на горизонте cfg.horizon.

    Raises:
        DomainError: горизонт больше 90 дней или θ₂ ∉ D_L
        UnsupportedModel: бесконечная активность
    """
    horizon = cfg.horizon
    if horizon > MC_DENSITY_MAX_HORIZON:
        raise DomainError(f"Проверка плотности ограничена горизонтом {MC_DENSITY_MAX_HORIZON} дней")
    brownian = _run_blocks(cfg, lambda rng, n: _brownian_density_block(rng, n, fp, mc, horizon, cfg.euler_dt))
    jumps = _jump_log_density(model, fp, mc, cfg, horizon)
    half = None
    if richardson:
        half_cfg = replace(cfg, euler_dt=cfg.euler_dt / 2.0)
        half = McEstimate.from_samples(_run_blocks(
            half_cfg, lambda rng, n: _brownian_density_block(rng, n, fp, mc, horizon, half_cfg.euler_dt)
        )["density"])
    check = DensityCheck(
        mean_G=McEstimate.from_samples(brownian["density"]),
        mean_H=McEstimate.from_samples(np.exp(jumps["log_density"])),
        mean_G_half=half,
    )
    logger.info("Плотности: E[𝓔(G̃)] = %.6f ± %.2e, E[𝓔(H̃)] = %.6f ± %.2e",
                check.mean_G.mean, check.mean_G.std_error, check.mean_H.mean, check.mean_H.std_error)
    return check


def esscher_density_gap(model: LevyModel, fp: FactorParams, mc: MeasureChange, cfg: SimConfig) -> float:
    """
    Максимум по путям |log 𝓔(H̃)(T) - (θ₂L(T) - κ(θ₂)T)| при β₂ = 0.
    """
    if mc.beta2 != 0.0:
        raise DomainError("Сведение к плотности Эсшера требует β₂ = 0")
    jumps = _jump_log_density(model, fp, mc, cfg, cfg.horizon)
    esscher = mc.theta2 * jumps["jump_sum"] - model.cumulant(mc.theta2, 0) * cfg.horizon
    return float(np.max(np.abs(jumps["log_density"] - esscher)))


# ==================== Форварды ====================

def _spot_samples(model_kind: str, fp: FactorParams, x_values: np.ndarray, y_values: np.ndarray, T: float):
    if model_kind == "arith":
        return fp.seasonality(T) + x_values + y_values
    fp.seasonality.require_positive(T)
    return fp.seasonality(T) * np.exp(x_values + y_values)


def _check_spot_model(model_kind: str, model: LevyModel) -> None:
    if model_kind not in SPOT_MODELS:
        raise DomainError(f"Неизвестная модель спот-цены: {model_kind}")
    if model_kind == "geom" and not model.domains().geometric_admissible:
        raise DomainError(f"Геометрическая модель требует Θ_L > 1, получено Θ_L = {model.theta_max}")


def mc_forward(model_kind: str, model: LevyModel, fp: FactorParams, mc: MeasureChange, cfg: SimConfig,
               T: float, state: Optional[MarketState] = None) -> McEstimate:
    """
    Оценка F_Q(t,T) прямым моделированием под Q.

    X(T) - точный гауссовский переход с параметрами Q, Y(T) - прореживание.
    Разные блоки путей для X и Y получают смещенный seed.

    Raises:
        WrongCase: геометрическая модель в Case3
    """
    _check_spot_model(model_kind, model)
    state = state if state is not None else MarketState(0.0, fp.x0, fp.y0)
    tau = state.time_to_maturity(T)
    if model_kind == "geom" and classify(model, fp, mc).case_tag == CASE3:
        raise WrongCase("Case3: E_Q[S(T)] не вычисляется методом Монте-Карло")
    fq = q_dynamics(model, fp, mc)
    x_values = simulate_X(fq, cfg, x0=state.x, horizon=tau) if tau > 0 else np.full(cfg.n_paths, state.x)
    y_cfg = replace(cfg, seed=cfg.seed + 1)
    y_values = simulate_Y_Q(model, fp, mc, y_cfg, y0=state.y, horizon=tau) if tau > 0 else np.full(cfg.n_paths, state.y)
    return McEstimate.from_samples(_spot_samples(model_kind, fp, x_values, y_values, T))


def mc_expected_spot(model_kind: str, model: LevyModel, fp: FactorParams, cfg: SimConfig, T: float,
                     state: Optional[MarketState] = None) -> McEstimate:
    """Оценка E_P[S(T)|F_t] моделированием под P."""
    _check_spot_model(model_kind, model)
    state = state if state is not None else MarketState(0.0, fp.x0, fp.y0)
    tau = state.time_to_maturity(T)
    x_values = simulate_X(fp, cfg, x0=state.x, horizon=tau) if tau > 0 else np.full(cfg.n_paths, state.x)
    y_cfg = replace(cfg, seed=cfg.seed + 1)
    y_values = simulate_Y_P(model, fp, y_cfg, y0=state.y, horizon=tau) if tau > 0 else np.full(cfg.n_paths, state.y)
    return McEstimate.from_samples(_spot_samples(model_kind, fp, x_values, y_values, T))


# ==================== Статистика ====================

def jump_count_chi_square(counts: np.ndarray, mean: float, min_expected: float = 5.0) -> ChiSquareResult:
    """
    Критерий хи-квадрат для числа скачков против закона Пуассона(mean).

    Крайние классы объединяются, пока ожидаемая частота меньше min_expected.
    """
    counts = np.asarray(counts, dtype=np.int64)
    n = counts.size
    if n == 0 or not mean > 0:
        raise DomainError("Требуются непустая выборка и положительное среднее")
    k_max = int(stats.poisson.ppf(1.0 - 1e-12, mean))
    # последний класс: k ≥ k_last
    k_last = k_max
    while k_last > 1 and n * stats.poisson.sf(k_last - 1, mean) < min_expected:
        k_last -= 1
    k_first = 0
    while k_first < k_last - 1 and n * stats.poisson.cdf(k_first, mean) < min_expected:
        k_first += 1

    edges = np.arange(k_first, k_last + 1)
    observed = np.array(
        [np.count_nonzero(counts <= k_first)]
        + [np.count_nonzero(counts == k) for k in edges[1:-1]]
        + [np.count_nonzero(counts >= k_last)],
        dtype=float,
    )
    expected = np.array(
        [stats.poisson.cdf(k_first, mean)]
        + [stats.poisson.pmf(k, mean) for k in edges[1:-1]]
        + [stats.poisson.sf(k_last - 1, mean)]
    ) * n
    statistic, p_value = stats.chisquare(observed, expected)
    return ChiSquareResult(statistic=float(statistic), p_value=float(p_value), dof=int(observed.size - 1))

# cli/scenario.py
"""
Сценарий расчета: субординатор, параметры факторов, смена меры,
состояние рынка, сетка τ и файлы вывода. Хранится в JSON.

Пример:
    {
      "version": "1.0",
      "spot_model": "arith",
      "levy": {"type": "cpexp", "c": 0.4, "lambda": 2.0},
      "factors": {"alpha_x": 0.099, "alpha_y": 0.3466, "sigma_x": 0.0158},
      "measure": {"theta": [-0.1, 0.95], "beta": [0.0, 0.0]},
      "state": {"t": 0.0, "x": 0.0, "y": 0.0},
      "grid": {"tau_min": 0.0, "tau_max": 360.0, "n_points": 361},
      "outputs": {"csv_path": "curve.csv"}
    }
"""
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from config import (
    DEFAULT_DELTA,
    FIGURE_N_POINTS,
    FIGURE_TAU_MAX,
    MC_DEFAULT_DT,
    MC_DEFAULT_PATHS,
    MC_DEFAULT_SEED,
    SCENARIO_VERSION,
)
from calculations.arithmetic_pricing import MarketState
from calculations.exceptions import ModelError, ScenarioError
from calculations.levy_models import LevyModel
from calculations.measure_change import FactorParams, MeasureChange
from calculations.model_factory import ModelFactory
from calculations.seasonality import Seasonality
from cli.validation_ranges import require_field

logger = logging.getLogger(__name__)

SPOT_MODELS = ("arith", "geom")
FACTOR_FIELDS = ("mu_x", "alpha_x", "sigma_x", "x0", "mu_y", "alpha_y", "y0")
OUTPUT_KEYS = ("csv_path", "svg_path", "xlsx_path")


def default_seasonality(spot_model: str) -> Seasonality:
    """Λ_a ≡ 0 для арифметической модели, Λ_g ≡ 1 для геометрической."""
    return Seasonality.constant(1.0 if spot_model == "geom" else 0.0)


@dataclass(frozen=True)
class CurveGrid:
    """Равномерная сетка τ (дни)."""

    tau_min: float = 0.0
    tau_max: float = FIGURE_TAU_MAX
    n_points: int = FIGURE_N_POINTS

    def __post_init__(self):
        if self.n_points < 2:
            raise ScenarioError(f"Сетка должна содержать не меньше 2 точек, получено {self.n_points}")
        if not self.tau_max > self.tau_min:
            raise ScenarioError("tau_max должно быть больше tau_min")

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.n_points)


@dataclass(frozen=True)
class McSettings:
    n_paths: int = MC_DEFAULT_PATHS
    seed: int = MC_DEFAULT_SEED
    dt: float = MC_DEFAULT_DT


@dataclass
class Scenario:
    """Полный набор входных данных одной команды."""

    model: LevyModel
    factors: FactorParams = field(default_factory=FactorParams)
    measure: MeasureChange = field(default_factory=MeasureChange)
    state: MarketState = field(default_factory=MarketState)
    grid: CurveGrid = field(default_factory=CurveGrid)
    spot_model: str = "arith"
    outputs: Dict[str, str] = field(default_factory=dict)
    mc: McSettings = field(default_factory=McSettings)
    delta: float = DEFAULT_DELTA
    description: str = ""

    def __post_init__(self):
        if self.spot_model not in SPOT_MODELS:
            raise ScenarioError(f"Неизвестная модель спот-цены: {self.spot_model!r}. Допустимые: arith, geom")
        unknown = set(self.outputs) - set(OUTPUT_KEYS)
        if unknown:
            raise ScenarioError(f"Неизвестные поля outputs: {', '.join(sorted(unknown))}")

    # ==================== Разбор ====================

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        """
        Строит сценарий из словаря JSON.

        Ошибки конструкторов модели (DomainError и др.) пробрасываются как есть,
        структурные ошибки и значения вне диапазонов дают ScenarioError.
        """
        if not isinstance(data, dict):
            raise ScenarioError("Сценарий должен быть объектом JSON")
        if "levy" not in data:
            raise ScenarioError("В сценарии не задан субординатор (поле levy)")

        levy = dict(data["levy"]) if isinstance(data["levy"], dict) else data["levy"]
        if isinstance(levy, dict):
            for key in ("c", "lambda", "alpha", "a"):
                if key in levy:
                    levy[key] = require_field(key, levy[key])
        model = ModelFactory().build_levy_model(levy)

        factors_data = _section(data, "factors")
        unknown = set(factors_data) - set(FACTOR_FIELDS) - {"seasonality"}
        if unknown:
            raise ScenarioError(f"Неизвестные поля factors: {', '.join(sorted(unknown))}")
        factor_values = {key: require_field(key, value) for key, value in factors_data.items() if key in FACTOR_FIELDS}
        if "seasonality" in factors_data:
            factor_values["seasonality"] = Seasonality.from_dict(factors_data["seasonality"])
        else:
            factor_values["seasonality"] = default_seasonality(data.get("spot_model", "arith"))
        factors = FactorParams(**factor_values)

        measure_data = _section(data, "measure")
        theta = _pair(measure_data.get("theta", [0.0, 0.0]), "theta")
        beta = _pair(measure_data.get("beta", [0.0, 0.0]), "beta")
        measure = MeasureChange(
            theta1=require_field("theta1", theta[0]),
            theta2=require_field("theta2", theta[1]),
            beta1=require_field("beta1", beta[0]),
            beta2=require_field("beta2", beta[1]),
        )

        state_data = _section(data, "state")
        state = MarketState(
            t=require_field("t", state_data.get("t", 0.0)),
            x=require_field("x", state_data.get("x", factors.x0)),
            y=require_field("y", state_data.get("y", factors.y0)),
        )

        grid_data = _section(data, "grid")
        grid = CurveGrid(
            tau_min=require_field("tau_min", grid_data.get("tau_min", 0.0)),
            tau_max=require_field("tau_max", grid_data.get("tau_max", FIGURE_TAU_MAX)),
            n_points=int(require_field("n_points", grid_data.get("n_points", FIGURE_N_POINTS))),
        )

        mc_data = _section(data, "mc")
        mc = McSettings(
            n_paths=int(require_field("n_paths", mc_data.get("n_paths", MC_DEFAULT_PATHS))),
            seed=int(require_field("seed", mc_data.get("seed", MC_DEFAULT_SEED))),
            dt=require_field("dt", mc_data.get("dt", MC_DEFAULT_DT)),
        )

        outputs = _section(data, "outputs")
        return cls(
            model=model,
            factors=factors,
            measure=measure,
            state=state,
            grid=grid,
            spot_model=data.get("spot_model", "arith"),
            outputs={key: str(value) for key, value in outputs.items() if value is not None},
            mc=mc,
            delta=float(data.get("delta", DEFAULT_DELTA)),
            description=str(data.get("description", "")),
        )

    def to_dict(self) -> dict:
        factors = {name: getattr(self.factors, name) for name in FACTOR_FIELDS}
        factors["seasonality"] = self.factors.seasonality.to_dict()
        return {
            "version": SCENARIO_VERSION,
            "description": self.description,
            "spot_model": self.spot_model,
            "levy": self.model.to_dict(),
            "factors": factors,
            "measure": self.measure.to_dict(),
            "state": {"t": self.state.t, "x": self.state.x, "y": self.state.y},
            "grid": {"tau_min": self.grid.tau_min, "tau_max": self.grid.tau_max, "n_points": self.grid.n_points},
            "mc": {"n_paths": self.mc.n_paths, "seed": self.mc.seed, "dt": self.mc.dt},
            "delta": self.delta,
            "outputs": dict(self.outputs),
        }


def _section(data: dict, name: str) -> dict:
    value = data.get(name, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ScenarioError(f"Поле {name} должно быть объектом JSON")
    return value


def _pair(value, name: str):
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ScenarioError(f"Поле {name} должно быть списком из двух чисел")
    return value


def load_scenario(path) -> Scenario:
    """
    Загрузить сценарий из JSON.

    Raises:
        ScenarioError: файл не найден, некорректный JSON или поле вне диапазона
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ScenarioError(f"Файл сценария не найден: {path}") from e
    except json.JSONDecodeError as e:
        logger.error("Ошибка разбора сценария %s: %s", path, e)
        raise ScenarioError(f"Некорректный JSON в файле {path}: {e}") from e

    version = data.get("version") if isinstance(data, dict) else None
    if version is not None and str(version) != SCENARIO_VERSION:
        logger.warning("Версия сценария %s отличается от поддерживаемой %s", version, SCENARIO_VERSION)
    try:
        scenario = Scenario.from_dict(data)
    except ModelError:
        raise
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"Некорректный сценарий {path}: {e}") from e
    logger.info("Сценарий загружен: %s", path)
    return scenario


def save_scenario(scenario: Scenario, path, timestamp: Optional[str] = None) -> Path:
    """Сохранить сценарий в JSON (UTF-8, отступ 2)."""
    path = Path(path)
    data = scenario.to_dict()
    data["timestamp"] = timestamp if timestamp is not None else datetime.now().isoformat()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
    logger.info("Сценарий сохранен: %s", path)
    return path

# tests/test_scenario.py
"""
Тесты сценария: разбор JSON, значения по умолчанию, сохранение и загрузка.
"""
import json

import numpy as np
import pytest

from calculations.exceptions import DomainError, ScenarioError
from calculations.levy_models import CompoundPoissonExpModel
from calculations.seasonality import Seasonality
from cli.scenario import CurveGrid, Scenario, default_seasonality, load_scenario, save_scenario


def _scenario_data(**overrides):
    data = {
        "version": "1.0",
        "spot_model": "arith",
        "levy": {"type": "cpexp", "c": 0.4, "lambda": 2.0},
        "factors": {"alpha_x": 0.099, "alpha_y": 0.3466, "sigma_x": 0.0158},
        "measure": {"theta": [-0.1, 0.95], "beta": [0.0, 0.0]},
        "state": {"t": 0.0, "x": 0.0, "y": 0.0},
        "grid": {"tau_min": 0.0, "tau_max": 360.0, "n_points": 361},
    }
    data.update(overrides)
    return data


class TestCurveGrid:
    """Тесты сетки τ."""

    def test_taus(self):
        taus = CurveGrid(0.0, 10.0, 11).taus()
        assert np.allclose(taus, np.arange(11.0))

    def test_too_few_points(self):
        with pytest.raises(ScenarioError, match="не меньше 2 точек"):
            CurveGrid(0.0, 10.0, 1)

    def test_empty_interval(self):
        with pytest.raises(ScenarioError, match="tau_max"):
            CurveGrid(5.0, 5.0, 10)


class TestScenarioFromDict:
    """Тесты разбора словаря сценария."""

    def test_full_scenario(self):
        scenario = Scenario.from_dict(_scenario_data())
        assert scenario.model == CompoundPoissonExpModel(0.4, 2.0)
        assert scenario.measure.theta2 == 0.95
        assert scenario.grid.n_points == 361
        assert scenario.factors.seasonality == Seasonality.constant(0.0)

    def test_geometric_default_seasonality(self):
        scenario = Scenario.from_dict(_scenario_data(spot_model="geom"))
        assert scenario.factors.seasonality == default_seasonality("geom")
        assert scenario.factors.seasonality.level == 1.0

    def test_explicit_seasonality(self):
        factors = {"seasonality": {"kind": "trig", "level": 50.0, "amplitude": 5.0}}
        scenario = Scenario.from_dict(_scenario_data(factors=factors))
        assert scenario.factors.seasonality.kind == "trig"

    def test_state_defaults_to_initial_factors(self):
        data = _scenario_data(factors={"x0": 0.3, "y0": 1.5})
        del data["state"]
        scenario = Scenario.from_dict(data)
        assert scenario.state.x == 0.3
        assert scenario.state.y == 1.5

    def test_missing_levy(self):
        data = _scenario_data()
        del data["levy"]
        with pytest.raises(ScenarioError, match="levy"):
            Scenario.from_dict(data)

    def test_unknown_factor_field(self):
        with pytest.raises(ScenarioError, match="Неизвестные поля factors: gamma"):
            Scenario.from_dict(_scenario_data(factors={"gamma": 1.0}))

    def test_beta_out_of_range(self):
        with pytest.raises(ScenarioError, match="Поле beta2"):
            Scenario.from_dict(_scenario_data(measure={"theta": [0.0, 0.0], "beta": [0.0, 1.2]}))

    def test_theta_must_be_pair(self):
        with pytest.raises(ScenarioError, match="двух чисел"):
            Scenario.from_dict(_scenario_data(measure={"theta": [0.1]}))

    def test_unknown_spot_model(self):
        with pytest.raises(ScenarioError, match="Неизвестная модель спот-цены"):
            Scenario.from_dict(_scenario_data(spot_model="linear"))

    def test_unknown_output(self):
        with pytest.raises(ScenarioError, match="outputs"):
            Scenario.from_dict(_scenario_data(outputs={"pdf_path": "a.pdf"}))

    def test_domain_errors_pass_through(self):
        """Ошибки параметров модели не превращаются в ScenarioError."""
        with pytest.raises(DomainError, match="alpha_y"):
            Scenario.from_dict(_scenario_data(factors={"alpha_y": 0.0}))


class TestScenarioFiles:
    """Тесты сохранения и загрузки файлов сценария."""

    def test_save_and_load(self, tmp_path):
        scenario = Scenario.from_dict(_scenario_data(spot_model="geom", outputs={"csv_path": "curve.csv"}))
        path = save_scenario(scenario, tmp_path / "nested" / "scenario.json", timestamp="2024-01-01T00:00:00")
        stored = json.loads(path.read_text(encoding="utf-8"))
        assert stored["timestamp"] == "2024-01-01T00:00:00"
        assert stored["levy"] == {"type": "cpexp", "c": 0.4, "lambda": 2.0}

        loaded = load_scenario(path)
        assert loaded.model == scenario.model
        assert loaded.factors == scenario.factors
        assert loaded.measure == scenario.measure
        assert loaded.outputs == {"csv_path": "curve.csv"}
        assert loaded.spot_model == "geom"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="не найден"):
            load_scenario(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{levy: cpexp", encoding="utf-8")
        with pytest.raises(ScenarioError, match="Некорректный JSON"):
            load_scenario(path)

    def test_json_array_rejected(self, tmp_path):
        path = tmp_path / "array.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ScenarioError, match="объектом JSON"):
            load_scenario(path)

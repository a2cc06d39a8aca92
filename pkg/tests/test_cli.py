# tests/test_cli.py
"""
Тесты командной строки: вывод команд и коды возврата.
"""
import io
import json

import numpy as np
import pandas as pd
import pytest

from cli.commands import apply_overrides, build_parser, default_scenario, resolve_seed, run
from cli.figures import FIGURES, figure_scenario, list_figures
from cli.validation_ranges import field_help
from calculations.exceptions import ScenarioError


def _run(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def _frame(text: str) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(text), comment="#")


class TestClassifyAndRiccati:
    """Тесты команд classify и riccati."""

    def test_classify_case3(self):
        code, text = _run("classify", "--beta2", "0.5")
        assert code == 0
        assert text.strip() == "Case3, u*≈0.719224, bound=0.333333"

    def test_classify_case1(self):
        code, text = _run("classify", "--theta2", "0.3", "--beta2", "0.2")
        assert code == 0
        assert text.startswith("Case1")

    def test_riccati_table(self):
        code, text = _run("riccati", "--theta2", "0.3", "--horizon", "10")
        assert code == 0
        frame = _frame(text)
        assert list(frame.columns) == ["t", "psi1", "psi0"]
        assert len(frame) == 11
        assert frame["psi1"].iloc[0] == 0.0

    def test_riccati_blow_up_refused(self):
        code, text = _run("riccati", "--beta2", "0.9", "--horizon", "100")
        assert code == 3
        assert "t_escape=" in text.splitlines()[0]
        frame = _frame(text)
        assert frame["t"].iloc[-1] < 100.0


class TestCurves:
    """Тесты кривых премии и форвардов."""

    def test_zero_measure_change_gives_zero_premium(self):
        code, text = _run("premium-curve")
        assert code == 0
        assert text.startswith("# schema v1 command=premium-curve")
        frame = _frame(text)
        assert frame.columns[0] == "tau_days"
        assert np.all(frame["risk_premium"].abs() < 1e-12)

    def test_reproduce_fig_sign_change(self):
        code, text = _run("reproduce-fig", "beta0-2a")
        assert code == 0
        premium = _frame(text)["risk_premium"].to_numpy()
        signs = np.sign(premium[np.abs(premium) > 1e-12])
        assert np.count_nonzero(np.diff(signs)) == 1
        assert signs[0] > 0

    def test_output_is_byte_stable(self):
        assert _run("reproduce-fig", "theta0-3a")[1] == _run("reproduce-fig", "theta0-3a")[1]

    def test_forward_table(self):
        code, text = _run("forward", "--theta2", "0.3", "--T", "10", "30")
        assert code == 0
        frame = _frame(text)
        assert list(frame["T"]) == [10.0, 30.0]
        assert np.allclose(frame["risk_premium"], frame["forward"] - frame["expected_spot"])

    def test_geometric_curve(self):
        code, text = _run("reproduce-fig", "general-7a")
        assert code == 0
        assert "case=Case1" in text.splitlines()[0]
        assert "sigma" in _frame(text).columns

    def test_csv_file_output(self, tmp_path):
        target = tmp_path / "curve.csv"
        code, text = _run("premium-curve", "--theta1", "0.075", "--out", str(target))
        assert code == 0
        assert text == ""
        assert np.all(_frame(target.read_text(encoding="utf-8"))["risk_premium"].iloc[1:] > 0)


class TestExitCodes:
    """Тесты кодов возврата."""

    def test_theta2_outside_domain(self):
        assert _run("premium-curve", "--theta2", "1.5")[0] == 2

    def test_beta_out_of_range(self):
        assert _run("classify", "--beta2", "1.5")[0] == 2

    def test_missing_scenario_file(self, tmp_path):
        assert _run("classify", "--scenario", str(tmp_path / "absent.json"))[0] == 2

    def test_geometric_case3_refused(self):
        assert _run("premium-curve", "--model", "geom", "--beta2", "0.9")[0] == 3

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            run(["price"], out=io.StringIO())


class TestMonteCarloCommand:
    """Тесты команды mc-check."""

    def test_expected_spot(self):
        code, text = _run("mc-check", "--what", "spot", "--paths", "5000", "--seed", "3", "--y", "0.5")
        assert code == 0
        frame = _frame(text)
        assert list(frame["quantity"]) == ["expected_spot"]
        assert "seed=3" in text.splitlines()[0]

    def test_density(self):
        code, text = _run("mc-check", "--what", "density", "--paths", "5000", "--seed", "3",
                          "--theta2", "0.3", "--beta2", "0.3", "--T", "10")
        assert code == 0
        assert list(_frame(text)["quantity"]) == ["density_G", "density_H"]

    def test_seed_precedence(self, monkeypatch):
        monkeypatch.setenv("SPIKE_PREMIUM_SEED", "77")
        assert resolve_seed(5) == 77
        assert resolve_seed(5, 9) == 9
        monkeypatch.setenv("SPIKE_PREMIUM_SEED", "abc")
        with pytest.raises(ScenarioError, match="целым числом"):
            resolve_seed(5)
        monkeypatch.delenv("SPIKE_PREMIUM_SEED")
        assert resolve_seed(5) == 5


class TestScenarioCommands:
    """Тесты встроенных сценариев и переопределений."""

    def test_list_figs(self):
        code, text = _run("list-figs")
        assert code == 0
        lines = text.strip().splitlines()
        assert len(lines) == len(FIGURES)
        assert lines[0].startswith("beta0-1a\tarith")

    def test_list_figs_follows_declaration_order(self):
        _, text = _run("list-figs")
        assert [line.split("\t")[0] for line in text.strip().splitlines()] == list_figures()

    def test_help_shows_ranges(self, capsys):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["forward", "--help"])
        text = " ".join(capsys.readouterr().out.split())
        assert " ".join(field_help("beta2", "изменение скорости возврата Y").split()) in text

    def test_figure_ids(self):
        assert list_figures()[0] == "beta0-1a"
        with pytest.raises(ScenarioError, match="Неизвестный профиль"):
            figure_scenario("fig-99")

    def test_geometric_figure_seasonality(self):
        assert figure_scenario("beta0-5a").factors.seasonality.level == 1.0
        assert figure_scenario("beta0-1a").factors.seasonality.level == 0.0

    def test_switch_to_geometric_model(self):
        args = build_parser().parse_args(["classify", "--model", "geom", "--theta1", "0.1"])
        scenario = apply_overrides(default_scenario(), args)
        assert scenario.spot_model == "geom"
        assert scenario.factors.seasonality.level == 1.0
        assert scenario.measure.theta1 == 0.1

    def test_levy_type_override(self):
        args = build_parser().parse_args(["classify", "--levy", "dirac", "--a", "1.0"])
        assert apply_overrides(default_scenario(), args).model.to_dict() == {"type": "dirac", "a": 1.0}

    def test_save_scenario(self, tmp_path):
        path = tmp_path / "scenario.json"
        code, _ = _run("save-scenario", "--fig", "beta0-2a", str(path))
        assert code == 0
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["measure"] == {"theta": [-0.1, 0.95], "beta": [0.0, 0.0]}
        code, text = _run("forward", "--scenario", str(path), "--T", "30")
        assert code == 0
        assert list(_frame(text).columns) == ["T", "forward", "expected_spot", "risk_premium"]

# cli/commands.py
"""
Команды CLI.

Результаты (CSV, отчеты) пишутся в stdout или в файлы, журнал - в stderr
и файл журнала. Коды возврата: 0 - успех, 1 - провал проверки
Монте-Карло, 2 - ошибка валидации, 3 - отказ (Case3, взрыв Ψ¹).
"""
import argparse
import logging
import os
import sys
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from config import (
    APP_NAME,
    APP_VERSION,
    EXIT_MC_FAILED,
    EXIT_OK,
    EXIT_REFUSED,
    EXIT_VALIDATION,
    MC_Z_FAIL,
    BASE_LEVY_C,
    BASE_LEVY_LAMBDA,
    SEED_ENV_VAR,
)
from calculations.affine_riccati import CASE3, classify, solve_riccati
from calculations.exceptions import BlowUp, ModelError, ScenarioError, WrongCase
from calculations.levy_models import CompoundPoissonExpModel
from calculations.model_factory import ModelFactory
from calculations.montecarlo import (
    McEstimate,
    SimConfig,
    density_martingale_check,
    mc_expected_spot,
    mc_forward,
)
from cli.export import curve_frame, table_frame, write_csv, write_svg, write_xlsx
from cli.figures import FIGURES, base_factors, figure_scenario, list_figures
from cli.scenario import Scenario, default_seasonality, load_scenario, save_scenario
from cli.validation_ranges import field_help
from logger_config import setup_logging

logger = logging.getLogger(__name__)

_factory = ModelFactory()


# ==================== Сценарий и переопределения ====================

def default_scenario() -> Scenario:
    """Базовый набор: сложный пуассоновский процесс 0.4·e^{-2z}, мера P."""
    return Scenario(
        model=CompoundPoissonExpModel(c=BASE_LEVY_C, lam=BASE_LEVY_LAMBDA),
        factors=base_factors(),
        description="базовый набор параметров",
    )


def resolve_seed(scenario_seed: int, cli_seed: Optional[int] = None) -> int:
    """Seed: аргумент командной строки, затем переменная окружения, затем сценарий."""
    if cli_seed is not None:
        return cli_seed
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value:
        try:
            return int(env_value)
        except ValueError as e:
            raise ScenarioError(f"{SEED_ENV_VAR} должна быть целым числом, получено {env_value!r}") from e
    return scenario_seed


def _load_base(args) -> Scenario:
    if getattr(args, "scenario", None) and getattr(args, "fig", None):
        raise ScenarioError("Укажите либо --scenario, либо --fig")
    if getattr(args, "scenario", None):
        return load_scenario(args.scenario)
    if getattr(args, "fig", None):
        return figure_scenario(args.fig)
    return default_scenario()


def apply_overrides(scenario: Scenario, args) -> Scenario:
    """Переопределяет поля сценария аргументами командной строки."""
    levy_keys = {"levy": "type", "c": "c", "lam": "lambda", "ts_alpha": "alpha", "a": "a"}
    levy_given = {key: getattr(args, attr) for attr, key in levy_keys.items() if getattr(args, attr, None) is not None}
    if levy_given:
        levy_spec = scenario.model.to_dict()
        if "type" in levy_given and levy_given["type"] != levy_spec["type"]:
            levy_spec = {"type": levy_given["type"]}
        levy_spec.update(levy_given)
        scenario = replace(scenario, model=_factory.build_levy_model(levy_spec))

    measure = scenario.measure
    measure_given = {name: getattr(args, name) for name in ("theta1", "theta2", "beta1", "beta2")
                     if getattr(args, name, None) is not None}
    if measure_given:
        scenario = replace(scenario, measure=replace(measure, **measure_given))

    state_given = {name: getattr(args, name) for name in ("t", "x", "y") if getattr(args, name, None) is not None}
    if state_given:
        scenario = replace(scenario, state=replace(scenario.state, **state_given))

    if getattr(args, "model", None) and args.model != scenario.spot_model:
        factors = scenario.factors
        # сезонность по умолчанию другой модели заменяется своей
        if factors.seasonality == default_seasonality(scenario.spot_model):
            factors = replace(factors, seasonality=default_seasonality(args.model))
        scenario = replace(scenario, spot_model=args.model, factors=factors)

    outputs = dict(scenario.outputs)
    for attr, key in (("out", "csv_path"), ("svg", "svg_path"), ("xlsx", "xlsx_path")):
        if getattr(args, attr, None):
            outputs[key] = getattr(args, attr)
    if outputs != scenario.outputs:
        scenario = replace(scenario, outputs=outputs)
    return scenario


def _meta(command: str, scenario: Scenario, **extra) -> dict:
    mc = scenario.measure
    meta = {
        "command": command,
        "spot_model": scenario.spot_model,
        "levy": str(scenario.model).replace(" ", ""),
        "theta": f"[{mc.theta1:g},{mc.theta2:g}]",
        "beta": f"[{mc.beta1:g},{mc.beta2:g}]",
        "x": scenario.state.x,
        "y": scenario.state.y,
    }
    meta.update(extra)
    return meta


def _emit(frame: pd.DataFrame, scenario: Scenario, meta: dict, out) -> None:
    write_csv(frame, scenario.outputs.get("csv_path") or out, meta)


def _pricer(scenario: Scenario):
    delta = scenario.delta if scenario.spot_model == "geom" else None
    return _factory.get_pricer(scenario.spot_model, scenario.model, scenario.factors, delta)


def _classification_report(classification) -> str:
    return f"{classification.case_tag}, u*≈{classification.u_star:.6f}, bound={classification.beta_bound:.6f}"


# ==================== Команды ====================

def cmd_cumulant(args, scenario: Scenario, out) -> int:
    thetas = np.asarray(args.theta, dtype=float)
    values = np.atleast_1d(scenario.model.cumulant(thetas, args.order))
    frame = table_frame(["theta", "kappa"], np.column_stack([thetas, values]))
    _emit(frame, scenario, {"command": "cumulant", "levy": str(scenario.model).replace(" ", ""),
                            "order": args.order, "theta_max": scenario.model.theta_max}, out)
    return EXIT_OK


def cmd_classify(args, scenario: Scenario, out) -> int:
    classification = classify(scenario.model, scenario.factors, scenario.measure, scenario.delta)
    out.write(_classification_report(classification) + "\n")
    return EXIT_OK


def cmd_riccati(args, scenario: Scenario, out) -> int:
    n_points = args.n_points if args.n_points else int(args.horizon) + 1
    grid = np.linspace(0.0, args.horizon, max(2, n_points))
    classification = classify(scenario.model, scenario.factors, scenario.measure, scenario.delta)
    meta = {"command": "riccati", "levy": str(scenario.model).replace(" ", ""),
            "theta2": scenario.measure.theta2, "beta2": scenario.measure.beta2,
            "case": classification.case_tag, "u_star": classification.u_star,
            "bound": classification.beta_bound}
    code = EXIT_OK
    try:
        solution = solve_riccati(scenario.model, scenario.factors, scenario.measure, args.horizon,
                                 t_eval=list(grid), delta=scenario.delta)
    except BlowUp as e:
        # выводится усеченное решение, код возврата - отказ
        logger.error("%s", e)
        solution = e.solution
        grid = grid[grid <= solution.horizon]
        meta["t_escape"] = float(e.t_escape)
        code = EXIT_REFUSED
    if solution.t_infinity is not None:
        meta["t_infinity"] = solution.t_infinity
    psi1, psi0 = solution.at(grid)
    _emit(table_frame(["t", "psi1", "psi0"], np.column_stack([grid, psi1, psi0])), scenario, meta, out)
    return code


def cmd_forward(args, scenario: Scenario, out) -> int:
    pricer = _pricer(scenario)
    maturities = np.asarray(args.T, dtype=float)
    if scenario.spot_model == "arith":
        forward = pricer.forward_price(scenario.measure, scenario.state, maturities)
        expected = pricer.expected_spot_P(scenario.state, maturities)
    else:
        forward = pricer.forward_price_geom(scenario.measure, scenario.state, maturities)
        expected = pricer.expected_spot_P_geom(scenario.state, maturities)
    forward, expected = np.atleast_1d(forward), np.atleast_1d(expected)
    frame = table_frame(["T", "forward", "expected_spot", "risk_premium"],
                        np.column_stack([maturities, forward, expected, forward - expected]))
    _emit(frame, scenario, _meta("forward", scenario), out)
    return EXIT_OK


def _premium_curve(command: str, scenario: Scenario, out) -> int:
    pricer = _pricer(scenario)
    taus = scenario.grid.taus()
    if scenario.spot_model == "arith":
        curve = pricer.premium_curve(scenario.measure, scenario.state, taus)
        meta = _meta(command, scenario)
    else:
        classification = classify(scenario.model, scenario.factors, scenario.measure, scenario.delta)
        if classification.case_tag == CASE3:
            raise WrongCase(f"геометрическая кривая не строится: {_classification_report(classification)}")
        curve = pricer.premium_curve_geom(scenario.measure, scenario.state, taus)
        meta = _meta(command, scenario, case=classification.case_tag)
    _emit(curve_frame(curve), scenario, meta, out)
    if scenario.outputs.get("svg_path"):
        write_svg(curve, scenario.outputs["svg_path"], title=scenario.description)
    if scenario.outputs.get("xlsx_path"):
        write_xlsx(curve_frame(curve), scenario.outputs["xlsx_path"], title=scenario.description, meta=meta)
    logger.info("Кривая %s: %d точек, смен знака %d", scenario.spot_model, taus.size, curve.zero_crossings())
    return EXIT_OK


def cmd_premium_curve(args, scenario: Scenario, out) -> int:
    return _premium_curve("premium-curve", scenario, out)


def cmd_reproduce_fig(args, scenario: Scenario, out) -> int:
    return _premium_curve(f"reproduce-fig {args.fig_id}", scenario, out)


def cmd_swap(args, scenario: Scenario, out) -> int:
    pricer = _pricer(scenario)
    if scenario.spot_model == "arith":
        price = pricer.swap_price(scenario.measure, scenario.state, args.T1, args.T2)
        premium = pricer.swap_risk_premium(scenario.measure, scenario.state, args.T1, args.T2)
        frame = table_frame(["T1", "T2", "swap_price", "swap_risk_premium"], [[args.T1, args.T2, price, premium]])
    else:
        premium = pricer.swap_risk_premium_geom(scenario.measure, scenario.state, args.T1, args.T2)
        frame = table_frame(["T1", "T2", "swap_risk_premium"], [[args.T1, args.T2, premium]])
    _emit(frame, scenario, _meta("swap", scenario), out)
    return EXIT_OK


def cmd_mc_check(args, scenario: Scenario, out) -> int:
    seed = resolve_seed(scenario.mc.seed, args.seed)
    n_paths = args.paths if args.paths is not None else scenario.mc.n_paths
    horizon = args.T - scenario.state.t if args.what in ("forward", "spot") else args.T
    cfg = SimConfig(n_paths=n_paths, dt=scenario.mc.dt, seed=seed, horizon=max(horizon, 1e-9),
                    workers=args.workers)
    rows = []

    def add(quantity: str, estimate: McEstimate, target: float):
        rows.append({"quantity": quantity, "mean": estimate.mean, "std_error": estimate.std_error,
                     "target": target, "z": estimate.z_score(target)})

    if args.what == "density":
        fp = replace(scenario.factors, x0=scenario.state.x, y0=scenario.state.y)
        check = density_martingale_check(scenario.model, fp, scenario.measure, cfg, richardson=args.richardson)
        add("density_G", check.mean_G, 1.0)
        add("density_H", check.mean_H, 1.0)
        if check.mean_G_half is not None:
            add("density_G_half", check.mean_G_half, 1.0)
    elif args.what == "forward":
        pricer = _pricer(scenario)
        if scenario.spot_model == "arith":
            target = pricer.forward_price(scenario.measure, scenario.state, args.T)
        else:
            target = pricer.forward_price_geom(scenario.measure, scenario.state, args.T)
        estimate = mc_forward(scenario.spot_model, scenario.model, scenario.factors, scenario.measure, cfg,
                              args.T, scenario.state)
        add("forward", estimate, float(target))
    else:
        pricer = _pricer(scenario)
        if scenario.spot_model == "arith":
            target = pricer.expected_spot_P(scenario.state, args.T)
        else:
            target = pricer.expected_spot_P_geom(scenario.state, args.T)
        estimate = mc_expected_spot(scenario.spot_model, scenario.model, scenario.factors, cfg, args.T,
                                    scenario.state)
        add("expected_spot", estimate, float(target))

    frame = pd.DataFrame(rows, columns=["quantity", "mean", "std_error", "target", "z"])
    _emit(frame, scenario, _meta("mc-check", scenario, what=args.what, paths=n_paths, seed=seed), out)
    worst = max(abs(row["z"]) for row in rows)
    if worst > MC_Z_FAIL:
        logger.error("Проверка Монте-Карло не пройдена: |z| = %.3f > %.1f", worst, MC_Z_FAIL)
        return EXIT_MC_FAILED
    return EXIT_OK


def cmd_list_figs(args, scenario: Optional[Scenario], out) -> int:
    for fig_id in list_figures():
        setup = FIGURES[fig_id]
        out.write(f"{fig_id}\t{setup.spot_model}\t{setup.caption}\n")
    return EXIT_OK


def cmd_save_scenario(args, scenario: Scenario, out) -> int:
    path = save_scenario(scenario, args.path)
    out.write(f"{path}\n")
    return EXIT_OK


# ==================== Разбор аргументов ====================

def _scenario_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    source = parent.add_argument_group("сценарий")
    source.add_argument("--scenario", help="файл сценария JSON")
    source.add_argument("--fig", help="встроенный сценарий (см. list-figs)")
    source.add_argument("--model", choices=["arith", "geom"], help="модель спот-цены")

    levy = parent.add_argument_group("субординатор")
    levy.add_argument("--levy", choices=list(ModelFactory.levy_types()))
    levy.add_argument("--c", type=float, help=field_help("c", "интенсивность меры Леви"))
    levy.add_argument("--lambda", dest="lam", type=float, help=field_help("lambda", "скорость убывания меры Леви"))
    levy.add_argument("--ts-alpha", type=float, help=field_help("alpha", "индекс α умеренно устойчивого процесса"))
    levy.add_argument("--a", type=float, help=field_help("a", "размер скачка модели Дирака"))

    measure = parent.add_argument_group("смена меры")
    for name, description in (("theta1", "сдвиг уровня X"), ("theta2", "сдвиг уровня Y"),
                              ("beta1", "изменение скорости возврата X"),
                              ("beta2", "изменение скорости возврата Y")):
        measure.add_argument(f"--{name}", type=float, help=field_help(name, description))

    state = parent.add_argument_group("состояние рынка")
    state.add_argument("--t", type=float, help=field_help("t", "текущее время, дни"))
    state.add_argument("--x", type=float, help=field_help("x", "X(t)"))
    state.add_argument("--y", type=float, help=field_help("y", "Y(t)"))

    output = parent.add_argument_group("вывод")
    output.add_argument("--out", help="файл CSV (по умолчанию stdout)")
    output.add_argument("--svg", help="файл SVG с графиком кривой")
    output.add_argument("--xlsx", help="файл Excel")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spike-premium",
                                     description=f"{APP_NAME} {APP_VERSION}: форварды и премии за риск "
                                                 f"двухфакторной модели цены электроэнергии")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="уровень журнала")
    subparsers = parser.add_subparsers(dest="command", required=True)
    parent = _scenario_parent()

    p = subparsers.add_parser("cumulant", parents=[parent], help="кумулянта κ_L и производные")
    p.add_argument("--theta", type=float, nargs="+", required=True)
    p.add_argument("--order", type=int, default=0, choices=[0, 1, 2, 3])
    p.set_defaults(handler=cmd_cumulant)

    p = subparsers.add_parser("classify", parents=[parent], help="случай уравнения Риккати")
    p.set_defaults(handler=cmd_classify)

    p = subparsers.add_parser("riccati", parents=[parent], help="решение (Ψ¹, Ψ⁰)")
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--n-points", type=int, default=None)
    p.set_defaults(handler=cmd_riccati)

    p = subparsers.add_parser("forward", parents=[parent], help="форвардные цены")
    p.add_argument("--T", type=float, nargs="+", required=True, help="даты поставки, дни")
    p.set_defaults(handler=cmd_forward)

    p = subparsers.add_parser("premium-curve", parents=[parent], help="кривая премии за риск")
    p.set_defaults(handler=cmd_premium_curve)

    p = subparsers.add_parser("swap", parents=[parent], help="своп с поставкой на [T1, T2]")
    p.add_argument("--T1", type=float, required=True)
    p.add_argument("--T2", type=float, required=True)
    p.set_defaults(handler=cmd_swap)

    p = subparsers.add_parser("mc-check", parents=[parent], help="проверка методом Монте-Карло")
    p.add_argument("--what", choices=["density", "forward", "spot"], required=True)
    p.add_argument("--paths", type=int, default=None, help=field_help("n_paths", "число путей"))
    p.add_argument("--seed", type=int, default=None, help=field_help("seed", "seed генератора"))
    p.add_argument("--T", type=float, default=30.0, help="дата поставки или горизонт плотности, дни")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--richardson", action="store_true", help="повтор плотности G с шагом dt/2")
    p.set_defaults(handler=cmd_mc_check)

    p = subparsers.add_parser("reproduce-fig", parents=[parent], help="встроенный профиль премии")
    p.add_argument("fig_id", choices=list(FIGURES))
    p.set_defaults(handler=cmd_reproduce_fig)

    p = subparsers.add_parser("list-figs", help="список встроенных профилей")
    p.set_defaults(handler=cmd_list_figs)

    p = subparsers.add_parser("save-scenario", parents=[parent], help="сохранить итоговый сценарий в JSON")
    p.add_argument("path")
    p.set_defaults(handler=cmd_save_scenario)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, configure_logging: bool = False) -> int:
    """
    Разбирает аргументы, выполняет команду и возвращает код возврата.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    if configure_logging:
        setup_logging(getattr(logging, args.log_level))

    try:
        if args.command == "list-figs":
            return args.handler(args, None, out)
        if args.command == "reproduce-fig":
            args.fig = args.fig_id
        scenario = apply_overrides(_load_base(args), args)
        logger.info("Команда %s, сценарий: %s", args.command, scenario.description or "без описания")
        return args.handler(args, scenario, out)
    except (BlowUp, WrongCase) as e:
        logger.error("Отказ: %s", e)
        sys.stderr.write(f"Отказ: {e}\n")
        return EXIT_REFUSED
    except ModelError as e:
        logger.error("Ошибка валидации: %s", e)
        sys.stderr.write(f"Ошибка: {e}\n")
        return EXIT_VALIDATION

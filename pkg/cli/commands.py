from __future__ import annotations

import argparse

from src.core.errors import InputValidationError, InsufficientDataError
from src.core.models.population import GammaTriple, MomentConvention, moments_from_gammas
from src.core.models.reports import McConfig
from src.core.schema_keys import Keys
from src.infrastructure.csv_source import CsvCountSource
from src.infrastructure.report_writer import to_json, to_tsv
from src.services import fit, montecarlo, theory
from src.services.estimators import member_table, spec_from_name
from src.services.reference import get_printed_reference
from src.services.settings import GridSpec, get_settings


def _gammas(args: argparse.Namespace) -> GammaTriple:
    return GammaTriple(gamma1=args.gamma1, gamma2=args.gamma2, gamma3=args.gamma3)


def _mc_config(args: argparse.Namespace) -> McConfig:
    return McConfig(
        gammas=_gammas(args),
        n=args.n,
        replicates=args.replicates,
        master_seed=args.seed,
        convention=MomentConvention(args.convention),
        design=args.design,
        population_size=args.population_size,
        workers=args.workers,
    )


def _sections(*tables: str) -> str:
    """Несколько TSV-таблиц подряд, разделённых пустой строкой."""
    return "\n".join(tables)


def parse_params(items: list[str]) -> dict[str, str]:
    params: dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputValidationError(f"параметр должен иметь вид key=value, получено {item!r}")
        params[key.strip()] = value.strip()
    return params


def cmd_fit(args: argparse.Namespace) -> str:
    sample = CsvCountSource(args.path).read_sample()
    result = fit.fit_gammas(sample, clamp=args.clamp)
    gof = {}
    notes = list(result.warnings)
    for marginal, values in (("x", sample.x), ("y", sample.y)):
        try:
            gof[marginal] = fit.poisson_gof(values)
        except InsufficientDataError as e:
            gof[marginal] = None
            notes.append(f"{marginal}: {e}")
            continue
        if gof[marginal].degenerate:
            notes.append(f"{marginal}: {gof[marginal].note}")

    if args.format == "json":
        return to_json({
            "fit": result,
            "gof": gof,
            "printed_goodness_of_fit": get_printed_reference().goodness_of_fit(),
            "notes": notes,
        })
    g = result.gammas
    se1, se2, se3 = result.standard_errors
    fit_row = {
        Keys.GAMMA1: g.gamma1, Keys.GAMMA2: g.gamma2, Keys.GAMMA3: g.gamma3,
        Keys.SE_GAMMA1: se1, Keys.SE_GAMMA2: se2, Keys.SE_GAMMA3: se3,
        Keys.LAMBDA1: result.lambda1, Keys.LAMBDA2: result.lambda2, Keys.RHO: result.rho,
        Keys.N: result.n, Keys.CLAMPED: result.clamped,
    }
    summary, cells = [], []
    for marginal, report in gof.items():
        if report is None:
            continue
        summary.append({
            Keys.MARGINAL: marginal, Keys.N: report.n, Keys.LAMBDA_HAT: report.lambda_hat,
            Keys.CHI2: report.chi2, Keys.DF: report.df, Keys.PVALUE: report.pvalue,
        })
        cells.extend(
            {Keys.MARGINAL: marginal, Keys.CELL: b.cell, Keys.OBSERVED: b.observed, Keys.EXPECTED: b.expected}
            for b in report.bins
        )
    return _sections(
        to_tsv(Keys.FIT_COLUMNS, [fit_row]),
        to_tsv(Keys.GOF_SUMMARY_COLUMNS, summary),
        to_tsv(Keys.GOF_COLUMNS, cells),
    )


def _theory_rows(rows) -> list[dict]:
    return [
        {
            Keys.ESTIMATOR: r.estimator, Keys.BIAS: r.bias, Keys.MSE: r.mse, Keys.PRE: r.pre,
            Keys.PRINTED_PRE: r.printed_pre, Keys.NOTE: r.note,
        }
        for r in rows
    ]


def cmd_pre_table(args: argparse.Namespace) -> str:
    report = theory.pre_table(_gammas(args), args.n, MomentConvention(args.convention))
    if args.format == "json":
        return to_json(report)
    efficiency = [
        {
            "condition": c.name, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds, "label": c.label,
            "mse_difference": c.mse_difference, "mse_difference_holds": c.mse_difference_holds,
        }
        for c in report.efficiency.conditions
    ]
    comparison = report.tm_as_printed
    annotations = list(report.annotations)
    if comparison is not None:
        annotations.append(
            f"MSE_min(t_m): printed={comparison.printed} derived={comparison.derived}"
            + (f" ({comparison.note})" if comparison.note else "")
        )
    return _sections(
        to_tsv(Keys.PRE_TABLE_COLUMNS, _theory_rows(report.rows) + _theory_rows(report.members)),
        to_tsv(Keys.EFFICIENCY_COLUMNS, efficiency),
        to_tsv(("annotation",), [{"annotation": a} for a in annotations]),
    )


def cmd_simulate(args: argparse.Namespace) -> str:
    cfg = _mc_config(args)
    spec = spec_from_name(args.estimator, parse_params(args.params), moments_from_gammas(cfg.gammas))
    spec = theory.resolve_free_parameters(spec, cfg.gammas, cfg.n, cfg.convention)
    report = montecarlo.check_quality(montecarlo.run_mc(cfg, spec))
    verdicts = montecarlo.arbitrate_bias(report, montecarlo.bias_predictions(spec, cfg.gammas, cfg.n))
    if args.format == "json":
        # число процессов не влияет на результат и в вывод не попадает
        config = cfg.model_dump(exclude={"workers"})
        return to_json({"config": config, "spec": spec, "report": report, "bias_verdicts": verdicts})
    row = {c: getattr(report, c) for c in Keys.MC_COLUMNS}
    return _sections(
        to_tsv(Keys.MC_COLUMNS, [row]),
        to_tsv(Keys.VERDICT_COLUMNS, [v.model_dump() for v in verdicts]),
    )


def _grid(args: argparse.Namespace, default: GridSpec) -> GridSpec:
    return GridSpec(
        start=default.start if args.grid_start is None else args.grid_start,
        stop=default.stop if args.grid_stop is None else args.grid_stop,
        step=default.step if args.grid_step is None else args.grid_step,
    )


def cmd_optimize(args: argparse.Namespace) -> str:
    cfg = _mc_config(args)
    settings = get_settings()
    if args.family == "weights":
        result = montecarlo.empirical_optimum_weights(cfg, args.member, pin_w2=args.pin_w2)
        columns = Keys.WEIGHTS_COLUMNS
    else:
        grid = _grid(args, settings.alpha_grid if args.family == "alpha" else settings.b_grid)
        if not grid.step > 0 or grid.stop < grid.start:
            raise InputValidationError(f"некорректная сетка: {grid.start}..{grid.stop} шаг {grid.step}")
        if args.family == "alpha":
            result = montecarlo.empirical_optimum_alpha(cfg, grid)
        else:
            result = montecarlo.empirical_optimum_b(cfg, grid)
        columns = Keys.OPTIMUM_COLUMNS
    if args.format == "json":
        return to_json(result)
    return to_tsv(columns, [result.model_dump()])


def cmd_members(args: argparse.Namespace) -> str:
    rows = member_table(moments_from_gammas(_gammas(args)))
    if args.format == "json":
        return to_json(rows)
    return to_tsv(Keys.MEMBER_COLUMNS, rows)

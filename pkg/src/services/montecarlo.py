"""
Монте-Карло: эмпирические смещение и MSE оценок, поиск оптимумов по сетке
и арбитраж между конвенциями моментов.

Реплики разбиты на блоки фиксированного размера, блок j берёт поток
(master_seed, PURPOSE_REPLICATES, j). Блоки считаются в любом порядке и на
любом числе процессов, а собираются строго по индексу: отчёт бит-в-бит
одинаков при любом workers.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np

from src.core.errors import (
    AllReplicatesFailedError,
    InputValidationError,
    SimulationQualityError,
    SingularDenominatorError,
)
from src.core.math.rng import PURPOSE_REPLICATES, PURPOSE_SRSWOR, poisson_array, stream_for
from src.core.models.estimator import (
    Difference,
    EstimatorSpec,
    ExpAlpha,
    ExpProduct,
    ExpRatio,
    General,
    MemberId,
    Ratio,
)
from src.core.models.population import GammaTriple, MomentConvention, moments_from_gammas
from src.core.models.reports import (
    BiasVerdict,
    McConfig,
    McReport,
    OptimumReport,
    WeightsOptimum,
)
from src.core.models.sample import SeedSpec
from src.infrastructure.event_log import events
from src.services import theory
from src.services.estimators import estimate_array, resolve_named_member
from src.services.settings import GridSpec, get_settings
from src.services.synth import generate_finite_population, srswor_indices

Z_LIMIT = 3.0


class ReplicateMeans:
    """Выборочные средние всех реплик и цели (X̄, Ȳ), против которых они сравниваются."""

    __slots__ = ("xbar", "ybar", "xbar_pop", "target")

    def __init__(self, xbar: np.ndarray, ybar: np.ndarray, xbar_pop: float, target: float):
        self.xbar = xbar
        self.ybar = ybar
        self.xbar_pop = xbar_pop
        self.target = target

    @property
    def replicates(self) -> int:
        return int(self.xbar.size)


def _iid_block(gammas: tuple[float, float, float], n: int, size: int, master_seed: int, j: int):
    stream = stream_for(master_seed, PURPOSE_REPLICATES, j)
    g1, g2, g3 = gammas
    k = poisson_array(g1, (size, n), stream)
    w = poisson_array(g2, (size, n), stream)
    z = poisson_array(g3, (size, n), stream)
    return (k + z).mean(axis=1), (w + z).mean(axis=1)


def _srswor_block(pop_x: np.ndarray, pop_y: np.ndarray, n: int, size: int, master_seed: int, j: int):
    stream = stream_for(master_seed, PURPOSE_SRSWOR, j)
    xbar = np.empty(size)
    ybar = np.empty(size)
    for r in range(size):
        idx = srswor_indices(pop_x.size, n, stream)
        xbar[r] = pop_x[idx].mean()
        ybar[r] = pop_y[idx].mean()
    return xbar, ybar


def _run_block(task: tuple):
    kind, *args = task
    if kind == "iid":
        return _iid_block(*args)
    return _srswor_block(*args)


def replicate_means(cfg: McConfig, replicate_block: int | None = None) -> ReplicateMeans:
    """Средние (x̄, ȳ) всех R реплик; общий набор для сравнения параметров (CRN)."""
    block = replicate_block or get_settings().replicate_block
    if block < 1:
        raise InputValidationError(f"размер блока реплик должен быть >= 1, получено {block}")
    g = cfg.gammas
    sizes = [min(block, cfg.replicates - j * block) for j in range((cfg.replicates + block - 1) // block)]

    if cfg.design == "iid":
        xbar_pop, target = g.lambda1, g.lambda2
        tasks = [("iid", g.as_tuple(), cfg.n, size, cfg.master_seed, j) for j, size in enumerate(sizes)]
    else:
        population = generate_finite_population(g, cfg.population_size, SeedSpec(master_seed=cfg.master_seed))
        xbar_pop = float(population.x.mean())
        target = float(population.y.mean())
        if xbar_pop <= 0:
            raise InputValidationError("в сгенерированной популяции все x равны нулю")
        tasks = [
            ("srswor", population.x, population.y, cfg.n, size, cfg.master_seed, j)
            for j, size in enumerate(sizes)
        ]

    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_block, tasks))
    else:
        parts = [_run_block(t) for t in tasks]
    events.log(
        event_name="montecarlo.replicates", event_category="simulation", event_action="drawn",
        counters={"blocks": len(tasks), "replicates": cfg.replicates}, level=logging.DEBUG,
    )
    return ReplicateMeans(
        np.concatenate([p[0] for p in parts]),
        np.concatenate([p[1] for p in parts]),
        xbar_pop,
        target,
    )


def _homogeneous(spec: EstimatorSpec) -> bool:
    # смещение и MSE линейны по моментам: масштабируются на (1 - n/N)
    if isinstance(spec, General):
        return spec.w1 == 1 and spec.w2 == 0
    return True


def _theory_columns(cfg: McConfig, spec: EstimatorSpec) -> tuple[float | None, float | None]:
    g, n, conv = cfg.gammas, cfg.n, cfg.convention
    try:
        t_bias = theory.bias(spec, g, n, conv)
        t_mse = theory.mse(spec, g, n, conv)
    except SingularDenominatorError:
        # разложение первого порядка не определено (ηX̄ + θ = 0), реплики при этом считаются
        return None, None
    if cfg.design == "srswor":
        if not _homogeneous(spec):
            return None, None
        fpc = 1.0 - cfg.n / cfg.population_size
        return t_bias * fpc, t_mse * fpc
    return t_bias, t_mse


def _z(emp: float, predicted: float | None, se: float) -> float | None:
    if predicted is None or not se > 0:
        return None
    return (emp - predicted) / se


def summarize(
    cfg: McConfig,
    spec: EstimatorSpec,
    means: ReplicateMeans,
    failure_threshold: float | None = None,
) -> McReport:
    threshold = get_settings().failure_threshold if failure_threshold is None else failure_threshold
    values, failed = estimate_array(spec, means.xbar, means.ybar, means.xbar_pop)
    failed_count = int(failed.sum())
    if failed_count == means.replicates:
        raise AllReplicatesFailedError(f"все {means.replicates} реплик завершились ошибкой вычисления")
    d = values[~failed] - means.target
    m = d.size
    d2 = d * d
    emp_bias = float(d.mean())
    emp_mse = float(d2.mean())
    se_bias = float(d.std(ddof=1) / math.sqrt(m)) if m > 1 else math.nan
    se_mse = float(d2.std(ddof=1) / math.sqrt(m)) if m > 1 else math.nan
    t_bias, t_mse = _theory_columns(cfg, spec)
    quality_ok = failed_count <= threshold * means.replicates
    if failed_count:
        events.log(
            event_name="montecarlo.run", event_category="simulation", event_action="failed_replicates",
            result_ok=quality_ok, counters={"failed": failed_count, "replicates": means.replicates},
            level=logging.WARNING,
        )
    return McReport(
        estimator=spec.label,
        replicates=means.replicates,
        failed_replicates=failed_count,
        emp_bias=emp_bias,
        emp_mse=emp_mse,
        se_bias=se_bias,
        se_mse=se_mse,
        theory_bias=t_bias,
        theory_mse=t_mse,
        z_bias=_z(emp_bias, t_bias, se_bias),
        z_mse=_z(emp_mse, t_mse, se_mse),
        convention=cfg.convention,
        target_mean=means.target,
        quality_ok=quality_ok,
    )


def run_mc(
    cfg: McConfig,
    spec: EstimatorSpec,
    replicate_block: int | None = None,
    failure_threshold: float | None = None,
) -> McReport:
    spec = theory.resolve_free_parameters(spec, cfg.gammas, cfg.n, cfg.convention)
    with events.operation(
        "montecarlo.run", "simulation",
        estimator=spec.label, n=cfg.n, replicates=cfg.replicates, design=cfg.design, workers=cfg.workers,
    ) as counters:
        report = summarize(cfg, spec, replicate_means(cfg, replicate_block), failure_threshold)
        counters["failed"] = report.failed_replicates
    return report


def check_quality(report: McReport, failure_threshold: float | None = None) -> McReport:
    """SimulationQualityError, если доля неудачных реплик выше порога."""
    threshold = get_settings().failure_threshold if failure_threshold is None else failure_threshold
    if not report.quality_ok:
        raise SimulationQualityError(report.failed_replicates, report.replicates, threshold)
    return report


# ----------------------------------------------------------------------
# Поиск оптимумов на общих случайных числах
# ----------------------------------------------------------------------

def _family_spec(family: str, value: float) -> EstimatorSpec:
    if family == "alpha":
        return ExpAlpha(alpha=value)
    if family == "b":
        return Difference(b=value)
    raise InputValidationError(f"неизвестное семейство: {family}")


def empirical_mse_curve(cfg: McConfig, family: str, grid: Sequence[float], means: ReplicateMeans | None = None) -> np.ndarray:
    """emp_mse в каждой точке сетки на одном и том же наборе реплик."""
    points = np.asarray(grid, dtype=np.float64)
    if points.size == 0:
        raise InputValidationError("сетка параметров пуста")
    means = means or replicate_means(cfg)
    curve = np.empty(points.size)
    for i, value in enumerate(points):
        values, failed = estimate_array(_family_spec(family, float(value)), means.xbar, means.ybar, means.xbar_pop)
        d = values[~failed] - means.target
        curve[i] = np.mean(d * d) if d.size else math.inf
    return curve


def _empirical_optimum(cfg: McConfig, family: str, grid: GridSpec | Sequence[float]) -> OptimumReport:
    points = grid.points() if isinstance(grid, GridSpec) else np.asarray(grid, dtype=np.float64)
    with events.operation("montecarlo.optimize", "simulation", family=family, grid=int(points.size)):
        curve = empirical_mse_curve(cfg, family, points)
    best = int(np.argmin(curve))
    optimum = theory.optimum_alpha if family == "alpha" else theory.optimum_b
    return OptimumReport(
        family=family,
        empirical=float(points[best]),
        empirical_mse=float(curve[best]),
        theory_as_printed=optimum(cfg.gammas, MomentConvention.AS_PRINTED),
        theory_corrected=optimum(cfg.gammas, MomentConvention.CORRECTED),
        grid_size=int(points.size),
    )


def empirical_optimum_alpha(cfg: McConfig, grid: GridSpec | Sequence[float]) -> OptimumReport:
    return _empirical_optimum(cfg, "alpha", grid)


def empirical_optimum_b(cfg: McConfig, grid: GridSpec | Sequence[float]) -> OptimumReport:
    return _empirical_optimum(cfg, "b", grid)


class _WeightSums:
    """Эмпирический MSE t_m как точная квадратичная форма по (w1, w2).

    t - Ȳ = w1·u + w2·v + c0, где u = ȳ·P - X̄, v = x̄ - X̄, c0 = X̄ - Ȳ.
    """

    def __init__(self, base: np.ndarray, xbar: np.ndarray, xbar_pop: float, target: float):
        u = base - xbar_pop
        v = xbar - xbar_pop
        self.c0 = xbar_pop - target
        self.uu = float(np.mean(u * u))
        self.vv = float(np.mean(v * v))
        self.uv = float(np.mean(u * v))
        self.u = float(np.mean(u))
        self.v = float(np.mean(v))

    def mse(self, w1, w2):
        c0 = self.c0
        return (
            w1 * w1 * self.uu + w2 * w2 * self.vv + c0 * c0
            + 2 * w1 * w2 * self.uv + 2 * w1 * c0 * self.u + 2 * w2 * c0 * self.v
        )


def _axis(centre: float, half_width: float, points: int) -> np.ndarray:
    span = half_width * max(abs(centre), 1.0)
    return centre + np.linspace(-span, span, points)


def empirical_optimum_weights(
    cfg: McConfig,
    member: MemberId | str,
    pin_w2: bool = False,
    points: int | None = None,
    half_width: float | None = None,
) -> WeightsOptimum:
    """Лучшая точка сетки points×points вокруг теоретических весов (при pin_w2: по w1)."""
    settings = get_settings()
    points = points or settings.weight_grid_points
    half_width = settings.weight_grid_half_width if half_width is None else half_width
    g, n, conv = cfg.gammas, cfg.n, cfg.convention

    spec = resolve_named_member(member, moments_from_gammas(g))
    if spec.alpha is None:
        spec = theory.resolve_free_parameters(spec.model_copy(update={"w1": 1.0}), g, n, conv)
    c = theory.tm_coefficients(spec.alpha, spec.eta, spec.theta, g, n, conv)
    w1_star, w2_star = theory.optimum_weights(c, pin_w2=pin_w2)

    with events.operation("montecarlo.optimize", "simulation", family="weights", member=spec.member):
        means = replicate_means(cfg)
        base_spec = spec.model_copy(update={"w1": 1.0, "w2": 0.0})
        base, failed = estimate_array(base_spec, means.xbar, means.ybar, means.xbar_pop)
        if failed.all():
            raise AllReplicatesFailedError("все реплики вырождены для выбранного члена семейства")
        sums = _WeightSums(base[~failed], means.xbar[~failed], means.xbar_pop, means.target)

    w1_axis = _axis(w1_star, half_width, points)
    w2_axis = np.zeros(1) if pin_w2 else _axis(w2_star, half_width, points)
    W1, W2 = np.meshgrid(w1_axis, w2_axis, indexing="ij")
    surface = sums.mse(W1, W2)
    i, j = np.unravel_index(int(np.argmin(surface)), surface.shape)
    return WeightsOptimum(
        member=spec.member or "general",
        empirical_w1=float(w1_axis[i]),
        empirical_w2=float(w2_axis[j]),
        empirical_mse=float(surface[i, j]),
        theory_w1=w1_star,
        theory_w2=w2_star,
        theory_mse_empirical=float(sums.mse(w1_star, w2_star)),
        grid_size=int(surface.size),
    )


# ----------------------------------------------------------------------
# Арбитраж формул смещения
# ----------------------------------------------------------------------

def bias_predictions(spec: EstimatorSpec, g: GammaTriple, n: int) -> dict[str, float]:
    """Конкурирующие предсказания смещения: общая форма в обеих конвенциях и напечатанная формула.

    Конвенции, в которых разложение не определено, в словарь не попадают.
    """
    predictions = {}
    for source, conv in (
        ("generic-corrected", MomentConvention.CORRECTED),
        ("generic-as-printed", MomentConvention.AS_PRINTED),
    ):
        try:
            predictions[source] = theory.bias(spec, g, n, conv)
        except SingularDenominatorError:
            continue
    printed_key = {Ratio: "ratio", ExpRatio: "exp-ratio", ExpProduct: "exp-product"}.get(type(spec))
    if printed_key:
        predictions["printed"] = theory.printed_bias(printed_key, g, n)
    return predictions


def arbitrate_bias(report: McReport, predictions: dict[str, float]) -> list[BiasVerdict]:
    """Какие предсказания лежат в пределах трёх стандартных ошибок от эмпирического смещения."""
    verdicts = []
    for source, predicted in predictions.items():
        z = _z(report.emp_bias, predicted, report.se_bias)
        verdicts.append(BiasVerdict(
            source=source,
            predicted=predicted,
            z=z,
            supported=z is not None and abs(z) <= Z_LIMIT,
        ))
    return verdicts

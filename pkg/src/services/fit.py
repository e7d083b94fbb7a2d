"""
Оценивание (γ1, γ2, γ3) по парным счётчикам методом моментов и проверка
пуассоновости маргиналей критерием χ² Пирсона.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from scipy.stats import poisson

from src.core.errors import InfeasibleMomentsError, InputValidationError, InsufficientDataError
from src.core.math.special import chi_square_sf
from src.core.models.population import GammaTriple, gammas_from_moments
from src.core.models.reports import FitResult, GofBin, GofReport
from src.core.models.sample import Sample
from src.infrastructure.event_log import events
from src.services.synth import sample_stats

MIN_EXPECTED = 5.0
MIN_GOF_SIZE = 10


def _standard_errors(g: GammaTriple, n: int) -> tuple[float, float, float]:
    # асимптотика: Var(sxy) = (λ1λ2 + γ3² + γ3)/n, Cov(x̄, sxy) = γ3/n
    g3 = g.gamma3
    l1, l2 = g.lambda1, g.lambda2
    var_cov = (l1 * l2 + g3 * g3 + g3) / n
    var_g1 = (l1 + l1 * l2 + g3 * g3 - g3) / n
    var_g2 = (l2 + l1 * l2 + g3 * g3 - g3) / n
    return tuple(float(v) for v in np.sqrt(np.maximum([var_g1, var_g2, var_cov], 0.0)))


def fit_gammas(s: Sample, clamp: bool = False) -> FitResult:
    """γ̂3 = sxy, γ̂1 = x̄ - sxy, γ̂2 = ȳ - sxy.

    Без clamp недопустимые моменты: InfeasibleMomentsError; с clamp
    отрицательные компоненты обнуляются, о чём сообщается в warnings.
    """
    if s.n < 2:
        raise InsufficientDataError(f"для оценки γ нужно n >= 2, получено n = {s.n}")
    with events.operation("fit.gammas", "fit", n=s.n, clamp=clamp) as counters:
        stats = sample_stats(s, require_second_moments=True)
        if stats.xbar <= 0 or stats.ybar <= 0:
            raise InputValidationError(
                f"вырожденная маргиналь: x̄ = {stats.xbar}, ȳ = {stats.ybar}"
            )
        warnings: list[str] = []
        clamped = False
        if not clamp:
            g = gammas_from_moments(stats.xbar, stats.ybar, stats.sxy)
        else:
            raw = {
                "gamma1": stats.xbar - stats.sxy,
                "gamma2": stats.ybar - stats.sxy,
                "gamma3": stats.sxy,
            }
            values = {}
            for name, value in raw.items():
                if value < 0:
                    clamped = True
                    warnings.append(f"{name} = {value:.6g} < 0 обнулено")
                    value = 0.0
                values[name] = value
            try:
                g = GammaTriple(**values)
            except ValueError as e:
                raise InfeasibleMomentsError(str(e), bound="gamma1 + gamma3 > 0, gamma2 + gamma3 > 0") from None
            if warnings:
                events.log(
                    event_name="fit.gammas", event_category="fit", event_action="clamp",
                    result_ok=True, data={"warnings": warnings}, level=logging.WARNING,
                )
        counters["clamped"] = int(clamped)
    lambda1, lambda2 = g.lambda1, g.lambda2
    return FitResult(
        gammas=g,
        standard_errors=_standard_errors(g, s.n),
        lambda1=lambda1,
        lambda2=lambda2,
        rho=g.gamma3 / math.sqrt(lambda1 * lambda2),
        n=s.n,
        clamped=clamped,
        warnings=warnings,
    )


def pearson_chi2(observed: Sequence[float], expected: Sequence[float]) -> float:
    o = np.asarray(observed, dtype=np.float64)
    e = np.asarray(expected, dtype=np.float64)
    if o.shape != e.shape or (e <= 0).any():
        raise InputValidationError("наблюдаемые и ожидаемые частоты не согласованы")
    return float(np.sum((o - e) ** 2 / e))


def _merge(cells: list[list], i: int, j: int) -> None:
    """Сливает ячейку j в соседнюю i (|i - j| = 1)."""
    lo, hi = (i, j) if i < j else (j, i)
    left, right = cells[lo], cells[hi]
    cells[lo] = [left[0], right[1], left[2] + right[2], left[3] + right[3]]
    del cells[hi]


def _binned(counts: np.ndarray, lam: float) -> list[list]:
    n = counts.size
    top = int(counts.max())
    observed = np.bincount(counts, minlength=top + 1)
    # ячейки 0..top-1 и хвост ">= top"
    cells = [[i, i, int(observed[i]), n * float(poisson.pmf(i, lam))] for i in range(top)]
    cells.append([top, None, int(observed[top]), n * float(poisson.sf(top - 1, lam))])

    while len(cells) > 1 and cells[0][3] < MIN_EXPECTED:
        _merge(cells, 1, 0)
    while len(cells) > 1 and cells[-1][3] < MIN_EXPECTED:
        _merge(cells, len(cells) - 2, len(cells) - 1)
    while len(cells) > 1:
        small = [k for k, c in enumerate(cells) if c[3] < MIN_EXPECTED]
        if not small:
            break
        k = min(small, key=lambda idx: cells[idx][3])
        if k == 0:
            neighbour = 1
        elif k == len(cells) - 1:
            neighbour = k - 1
        else:
            neighbour = k - 1 if cells[k - 1][3] <= cells[k + 1][3] else k + 1
        _merge(cells, neighbour, k)
    return cells


def poisson_gof(values: Sequence[int]) -> GofReport:
    counts = np.asarray(values)
    if counts.ndim != 1 or counts.size < MIN_GOF_SIZE:
        raise InsufficientDataError(
            f"для критерия согласия нужно не меньше {MIN_GOF_SIZE} наблюдений, получено {counts.size}"
        )
    if not np.issubdtype(counts.dtype, np.integer):
        if not np.all(np.isfinite(counts)) or not np.all(counts == np.round(counts)):
            raise InputValidationError("счётчики должны быть целыми")
        counts = counts.astype(np.int64)
    if (counts < 0).any():
        raise InputValidationError("счётчики должны быть неотрицательными")

    n = int(counts.size)
    lam = float(counts.mean())
    if lam == 0:
        return GofReport(
            n=n, lambda_hat=0.0, chi2=0.0, df=1, pvalue=1.0,
            bins=[GofBin(low=0, high=None, observed=n, expected=float(n))],
            degenerate=True, note="все значения равны нулю; критерий не применим",
        )

    cells = _binned(counts, lam)
    bins = [GofBin(low=c[0], high=c[1], observed=c[2], expected=c[3]) for c in cells]
    if len(bins) < 2:
        # одна ячейка: наблюдаемое совпадает с ожидаемым по построению
        return GofReport(
            n=n, lambda_hat=lam, chi2=0.0, df=1, pvalue=1.0, bins=bins,
            degenerate=True, note="после объединения осталась одна ячейка; критерий не применим",
        )
    chi2 = pearson_chi2([b.observed for b in bins], [b.expected for b in bins])
    df = max(len(bins) - 2, 1)
    report = GofReport(
        n=n, lambda_hat=lam, chi2=chi2, df=df, pvalue=chi_square_sf(chi2, df), bins=bins,
    )
    events.log(
        event_name="fit.gof", event_category="fit", event_action="finish", result_ok=True,
        counters={"n": n, "bins": len(bins)}, data={"lambda_hat": lam, "chi2": chi2},
        level=logging.DEBUG,
    )
    return report

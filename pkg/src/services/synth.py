"""
Генерация двумерных пуассоновских данных тривариантной редукцией.

Записи разбиты на блоки фиксированного размера; блок j получает собственный
поток (master_seed, назначение, j). Поэтому выборка бит-в-бит одинакова
при любом числе воркеров.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.core.errors import InputValidationError, InsufficientDataError
from src.core.math.rng import (
    PURPOSE_POPULATION,
    PURPOSE_RECORDS,
    PURPOSE_SRSWOR,
    poisson_array,
    stream_for,
)
from src.core.models.population import GammaTriple
from src.core.models.sample import Sample, SampleStats, SeedSpec
from src.services.settings import get_settings


def _check_size(value: int, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InputValidationError(f"{name} должно быть целым >= 1, получено {value}")
    return int(value)


def draw_block(g: GammaTriple, size: int, stream: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Пары (k + z, w + z) для size записей из одного потока."""
    k = poisson_array(g.gamma1, size, stream)
    w = poisson_array(g.gamma2, size, stream)
    z = poisson_array(g.gamma3, size, stream)
    return k + z, w + z


def _draw_records(
    g: GammaTriple,
    count: int,
    seed: SeedSpec,
    purpose: int,
    record_block: int | None,
    workers: int,
) -> Sample:
    # размер блока записей из config/defaults.json, если не задан явно
    if record_block is None:
        record_block = get_settings().record_block
    record_block = _check_size(record_block, "record_block")
    blocks = [
        (j, min(record_block, count - j * record_block))
        for j in range((count + record_block - 1) // record_block)
    ]

    def run(block: tuple[int, int]):
        j, size = block
        return draw_block(g, size, stream_for(seed.master_seed, purpose, j))

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    x = np.concatenate([p[0] for p in parts])
    y = np.concatenate([p[1] for p in parts])
    return Sample(x, y)


def draw_bivariate_sample(
    g: GammaTriple,
    n: int,
    seed: SeedSpec,
    record_block: int | None = None,
    workers: int = 1,
) -> Sample:
    n = _check_size(n, "n")
    return _draw_records(g, n, seed, PURPOSE_RECORDS, record_block, workers)


def generate_finite_population(
    g: GammaTriple,
    N: int,
    seed: SeedSpec,
    record_block: int | None = None,
    workers: int = 1,
) -> Sample:
    N = _check_size(N, "N")
    return _draw_records(g, N, seed, PURPOSE_POPULATION, record_block, workers)


def srswor_indices(N: int, n: int, stream: np.random.Generator) -> np.ndarray:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InputValidationError(f"объём выборки должен быть >= 1, получено {n}")
    if n > N:
        raise InputValidationError(f"объём выборки {n} больше объёма популяции {N}")
    return stream.choice(N, size=int(n), replace=False)


def srswor(population: Sample, n: int, seed: SeedSpec) -> Sample:
    """Простая случайная выборка без возвращения: включение каждой единицы с вероятностью n/N."""
    idx = srswor_indices(population.n, n, stream_for(seed.master_seed, PURPOSE_SRSWOR))
    return Sample(population.x[idx], population.y[idx])


def sample_stats(s: Sample, require_second_moments: bool = False) -> SampleStats:
    n = s.n
    x = s.x.astype(np.float64)
    y = s.y.astype(np.float64)
    xbar = float(x.mean())
    ybar = float(y.mean())
    if n < 2:
        if require_second_moments:
            raise InsufficientDataError("для дисперсий и ковариации нужно n >= 2, получено n = 1")
        return SampleStats(n=n, xbar=xbar, ybar=ybar)
    dx = x - xbar
    dy = y - ybar
    return SampleStats(
        n=n,
        xbar=xbar,
        ybar=ybar,
        s2x=float(dx @ dx) / (n - 1),
        s2y=float(dy @ dy) / (n - 1),
        sxy=float(dx @ dy) / (n - 1),
    )

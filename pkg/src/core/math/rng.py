"""
Воспроизводимые потоки случайных чисел и точный пуассоновский генератор.

Потоки выводятся из (master_seed, назначение, индекс блока) через
numpy.random.SeedSequence(spawn_key=...). Конструкция расщепляемая:
узел дерева однозначно задаётся путём, и результат не зависит от того,
какой воркер и в каком порядке его считает.

Пуассоновские величины берутся из numpy.random.Generator.poisson. Он точный:
при λ < 10 мультипликативный метод (эквивалент обращения функции
распределения по экспоненциальным интервалам), при λ >= 10 PTRS,
трансформированное отбраковывание Хёрманна. Нормальной аппроксимации нет.
"""
from __future__ import annotations

import math

import numpy as np

from src.core.errors import InputValidationError

# Назначения потоков: разные подсистемы не делят случайные числа.
PURPOSE_RECORDS = 0
PURPOSE_REPLICATES = 1
PURPOSE_POPULATION = 2
PURPOSE_SRSWOR = 3


def stream_for(master_seed: int, *path: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.PCG64(seq))


def _check_rate(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam < 0:
        raise InputValidationError(f"параметр Пуассона должен быть конечным и >= 0, получено {lam}")
    return lam


def poisson_draw(lam: float, stream: np.random.Generator) -> int:
    lam = _check_rate(lam)
    if lam == 0:
        return 0
    return int(stream.poisson(lam))


def poisson_array(lam: float, size, stream: np.random.Generator) -> np.ndarray:
    """Вектор независимых Po(λ) того же закона, что и poisson_draw."""
    lam = _check_rate(lam)
    if lam == 0:
        return np.zeros(size, dtype=np.int64)
    return stream.poisson(lam, size=size).astype(np.int64, copy=False)

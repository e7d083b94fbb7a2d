from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class SeedSpec(BaseModel):
    """Главное зерно: из него выводятся все потоки случайных чисел."""

    model_config = ConfigDict(frozen=True)

    master_seed: int = Field(ge=0, lt=2**64)


class Sample:
    """Упорядоченные пары счётчиков (x, y).

    Хранится как два неизменяемых массива int64: выборки бывают по 10^6 пар,
    поэтому pydantic-модель здесь не подходит.
    """

    __slots__ = ("_x", "_y")

    def __init__(self, x, y):
        # собственная копия: массивы вызывающего кода не должны менять выборку
        x = np.array(x, dtype=np.int64).reshape(-1)
        y = np.array(y, dtype=np.int64).reshape(-1)
        if x.shape != y.shape:
            raise ValueError(f"длины x и y различаются: {x.size} != {y.size}")
        if x.size < 1:
            raise ValueError("выборка должна содержать хотя бы одну пару")
        if (x < 0).any() or (y < 0).any():
            raise ValueError("счётчики должны быть неотрицательными")
        x.setflags(write=False)
        y.setflags(write=False)
        self._x = x
        self._y = y

    @classmethod
    def from_pairs(cls, pairs) -> "Sample":
        arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1])

    @property
    def x(self) -> np.ndarray:
        return self._x

    @property
    def y(self) -> np.ndarray:
        return self._y

    @property
    def n(self) -> int:
        return int(self._x.size)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self._x.tolist(), self._y.tolist()))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return np.array_equal(self._x, other._x) and np.array_equal(self._y, other._y)

    def __repr__(self) -> str:
        return f"Sample(n={self.n})"


class SampleStats(BaseModel):
    """Выборочные средние и (при n >= 2) вторые моменты с делителем n - 1."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    xbar: float
    ybar: float
    s2x: float | None = None
    s2y: float | None = None
    sxy: float | None = None

    @field_validator("s2x", "s2y")
    @classmethod
    def _variance_non_negative(cls, value: float | None) -> float | None:
        if value is not None and value < 0:
            raise ValueError("выборочная дисперсия не может быть отрицательной")
        return value

    @property
    def has_second_moments(self) -> bool:
        return self.s2x is not None

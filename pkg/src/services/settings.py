from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.core.models.population import MomentConvention
from src.infrastructure.config_loader import load_validated


class GridSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: float

    def points(self) -> np.ndarray:
        """Узлы сетки от start до stop включительно (без накопления ошибки шага)."""
        count = int(round((self.stop - self.start) / self.step)) + 1
        return self.start + self.step * np.arange(max(count, 1))


class Settings(BaseModel):
    """Значения по умолчанию из config/defaults.json."""

    model_config = ConfigDict(frozen=True)

    sample_size: int
    replicates: int
    master_seed: int
    convention: MomentConvention
    workers: int
    record_block: int
    replicate_block: int
    failure_threshold: float
    weight_grid_points: int
    weight_grid_half_width: float
    alpha_grid: GridSpec
    b_grid: GridSpec

    @classmethod
    def load(cls, directory: Path | None = None) -> "Settings":
        data = load_validated("defaults.json", "defaults.schema.json", directory)
        data.pop("schema_version", None)
        return cls.model_validate(data)


@lru_cache
def get_settings() -> Settings:
    """Один экземпляр настроек на процесс."""
    return Settings.load()

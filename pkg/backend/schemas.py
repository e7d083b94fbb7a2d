from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from src.core.models.population import GammaTriple, MomentConvention


class HealthResponse(BaseModel):
    status: str
    version: str


class TheoryRequest(BaseModel):
    gammas: GammaTriple
    n: int = Field(default=20, ge=1)
    convention: MomentConvention = MomentConvention.CORRECTED


class FitRequest(BaseModel):
    """Пары счётчиков списком или текстом CSV (формат как у команды fit)."""

    pairs: list[tuple[int, int]] | None = None
    csv: str | None = None
    clamp: bool = False


class SimulateRequest(BaseModel):
    gammas: GammaTriple
    n: int = Field(default=20, ge=1)
    replicates: int = Field(default=10000, ge=2)
    seed: int = Field(default=20150101, ge=0, lt=2**64)
    estimator: str = "mean"
    params: dict[str, float | str] = Field(default_factory=dict)
    convention: MomentConvention = MomentConvention.CORRECTED
    design: Literal["iid", "srswor"] = "iid"
    population_size: int | None = Field(default=None, ge=1)

"""Результаты теории, подгонки и моделирования (сериализуются в JSON как есть)."""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.models.estimator import EstimatorSpec
from src.core.models.population import GammaTriple, MomentConvention


class _Report(BaseModel):
    model_config = ConfigDict(frozen=True)


class TmCoefficients(_Report):
    """Коэффициенты квадратичной формы MSE(t_m) = (1 - 2w1)δ² + w1²A + w2²B + 2w1w2C."""

    a: float
    k: float
    d_quad: float
    delta: float
    A: float
    B: float
    C: float

    @property
    def determinant(self) -> float:
        return self.A * self.B - self.C * self.C

    def mse_at(self, w1: float, w2: float) -> float:
        d2 = self.delta * self.delta
        return (1 - 2 * w1) * d2 + w1 * w1 * self.A + w2 * w2 * self.B + 2 * w1 * w2 * self.C


class TheoryRow(_Report):
    estimator: str
    spec: EstimatorSpec
    bias: float
    mse: float
    pre: float
    printed_pre: float | None = None
    note: str | None = None


class EfficiencyCondition(_Report):
    name: str
    lhs: float
    rhs: float
    holds: bool
    label: str
    mse_difference: float | None = None
    mse_difference_holds: bool | None = None


class EfficiencyReport(_Report):
    convention: MomentConvention
    conditions: list[EfficiencyCondition]


class AsPrintedComparison(_Report):
    """Опубликованная замкнутая форма MSE_min(t_m) рядом с пересчитанной."""

    printed: float | None
    derived: float | None
    discrepancy: float | None
    comparable: bool
    note: str | None = None


class TheoryReport(_Report):
    gammas: GammaTriple
    n: int
    convention: MomentConvention
    base_variance: float
    rows: list[TheoryRow]
    members: list[TheoryRow] = Field(default_factory=list)
    efficiency: EfficiencyReport | None = None
    tm_as_printed: AsPrintedComparison | None = None
    annotations: list[str] = Field(default_factory=list)


class GofBin(_Report):
    low: int
    high: int | None
    observed: int
    expected: float

    @property
    def cell(self) -> str:
        if self.high is None:
            return f">={self.low}"
        if self.high == self.low:
            return str(self.low)
        return f"{self.low}-{self.high}"


class GofReport(_Report):
    n: int
    lambda_hat: float
    chi2: float = Field(ge=0)
    df: int = Field(ge=1)
    pvalue: float = Field(ge=0, le=1)
    bins: list[GofBin]
    degenerate: bool = False
    note: str | None = None


class FitResult(_Report):
    gammas: GammaTriple
    standard_errors: tuple[float, float, float]
    lambda1: float
    lambda2: float
    rho: float
    n: int
    clamped: bool = False
    warnings: list[str] = Field(default_factory=list)


class McConfig(_Report):
    gammas: GammaTriple
    n: int = Field(ge=1)
    replicates: int = Field(ge=2)
    master_seed: int = Field(ge=0, lt=2**64)
    convention: MomentConvention = MomentConvention.CORRECTED
    design: Literal["iid", "srswor"] = "iid"
    population_size: int | None = Field(default=None, ge=1)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _design_consistent(self) -> "McConfig":
        if self.design == "srswor":
            if self.population_size is None:
                raise ValueError("для плана srswor нужен population_size")
            if self.population_size < self.n:
                raise ValueError("population_size должен быть >= n")
        return self


class McReport(_Report):
    estimator: str
    replicates: int
    failed_replicates: int
    emp_bias: float
    emp_mse: float = Field(ge=0)
    se_bias: float
    se_mse: float
    theory_bias: float | None
    theory_mse: float | None
    z_bias: float | None
    z_mse: float | None
    convention: MomentConvention
    target_mean: float
    quality_ok: bool = True


class BiasVerdict(_Report):
    source: str
    predicted: float
    z: float | None
    supported: bool


class OptimumReport(_Report):
    family: str
    empirical: float
    empirical_mse: float
    theory_as_printed: float
    theory_corrected: float
    grid_size: int


class WeightsOptimum(_Report):
    member: str
    empirical_w1: float
    empirical_w2: float
    empirical_mse: float
    theory_w1: float
    theory_w2: float
    theory_mse_empirical: float
    grid_size: int

"""
Двумерная пуассоновская популяция, построенная тривариантной редукцией:

    x = k + z,  y = w + z,  k ~ Po(γ1), w ~ Po(γ2), z ~ Po(γ3) независимы.

Здесь же аналитические моменты, которыми пользуются остальные модули.
"""
from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from src.core.errors import InfeasibleMomentsError, InputValidationError


class MomentConvention(str, Enum):
    """Какие относительные моменты подставлять в формулы смещения и MSE.

    AS_PRINTED: моменты в опубликованном виде (λ/n), CORRECTED: настоящие
    относительные моменты выборочных средних (1/(nλ)).
    """

    AS_PRINTED = "as-printed"
    CORRECTED = "corrected"


class GammaTriple(BaseModel):
    """Интенсивности латентных компонент k, w и общей компоненты z."""

    model_config = ConfigDict(frozen=True)

    gamma1: float
    gamma2: float
    gamma3: float

    @field_validator("gamma1", "gamma2", "gamma3")
    @classmethod
    def _finite_non_negative(cls, value: float) -> float:
        if not math.isfinite(value) or value < 0:
            raise ValueError(f"интенсивность должна быть конечной и >= 0, получено {value}")
        return value

    @model_validator(mode="after")
    def _marginals_non_degenerate(self) -> "GammaTriple":
        if self.gamma1 + self.gamma3 <= 0:
            raise ValueError("вырожденная маргиналь x: gamma1 + gamma3 = 0")
        if self.gamma2 + self.gamma3 <= 0:
            raise ValueError("вырожденная маргиналь y: gamma2 + gamma3 = 0")
        return self

    @property
    def lambda1(self) -> float:
        return self.gamma1 + self.gamma3

    @property
    def lambda2(self) -> float:
        return self.gamma2 + self.gamma3

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.gamma1, self.gamma2, self.gamma3)


class PopulationMoments(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambda1: float
    lambda2: float
    xbar: float
    ybar: float
    var_x: float
    var_y: float
    cov_xy: float
    rho: float
    cx: float
    cy: float
    skew_x: float
    kurt_x: float


class RelativeMoments(BaseModel):
    """E(e0²), E(e1²), E(e0·e1) для выборки объёма n."""

    model_config = ConfigDict(frozen=True)

    e00: float
    e11: float
    e01: float
    n: int


def moments_from_gammas(g: GammaTriple) -> PopulationMoments:
    lambda1 = g.gamma1 + g.gamma3
    lambda2 = g.gamma2 + g.gamma3
    cov = g.gamma3
    return PopulationMoments(
        lambda1=lambda1,
        lambda2=lambda2,
        xbar=lambda1,
        ybar=lambda2,
        var_x=lambda1,
        var_y=lambda2,
        cov_xy=cov,
        rho=cov / math.sqrt(lambda1 * lambda2),
        cx=1.0 / math.sqrt(lambda1),
        cy=1.0 / math.sqrt(lambda2),
        skew_x=1.0 / math.sqrt(lambda1),
        kurt_x=3.0 + 1.0 / lambda1,
    )


def gammas_from_moments(lambda1: float, lambda2: float, cov: float) -> GammaTriple:
    """Обратное преобразование: (λ1, λ2, Cov) -> (λ1 - Cov, λ2 - Cov, Cov)."""
    for name, value in (("lambda1", lambda1), ("lambda2", lambda2)):
        if not math.isfinite(value) or value <= 0:
            raise InputValidationError(f"{name} должно быть положительным, получено {value}")
    if not math.isfinite(cov):
        raise InputValidationError(f"cov должна быть конечной, получено {cov}")
    if cov < 0:
        raise InfeasibleMomentsError(
            f"cov = {cov} < 0: тривариантная редукция не даёт отрицательной связи",
            bound="cov >= 0",
        )
    upper = min(lambda1, lambda2)
    if cov > upper:
        raise InfeasibleMomentsError(
            f"cov = {cov} > min(lambda1, lambda2) = {upper}",
            bound="cov <= min(lambda1, lambda2)",
        )
    return GammaTriple(gamma1=lambda1 - cov, gamma2=lambda2 - cov, gamma3=cov)


def relative_moments(g: GammaTriple, n: int, conv: MomentConvention) -> RelativeMoments:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InputValidationError(f"n должно быть целым >= 1, получено {n}")
    n = int(n)
    lambda1 = g.lambda1
    lambda2 = g.lambda2
    if MomentConvention(conv) is MomentConvention.AS_PRINTED:
        return RelativeMoments(e00=lambda2 / n, e11=lambda1 / n, e01=g.gamma3 / n, n=n)
    return RelativeMoments(
        e00=1.0 / (n * lambda2),
        e11=1.0 / (n * lambda1),
        e01=g.gamma3 / (n * lambda1 * lambda2),
        n=n,
    )

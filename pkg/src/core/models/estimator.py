"""
Описание оценки среднего: одно из семейств со свободными параметрами.

Для General значение None у w1 или alpha означает «свободный параметр»:
его подбирает theory.resolve_free_parameters до вычисления.
"""
from __future__ import annotations

from enum import Enum
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    @property
    def label(self) -> str:
        return self.kind


class MeanOnly(_Spec):
    kind: Literal["mean"] = "mean"


class Ratio(_Spec):
    kind: Literal["ratio"] = "ratio"


class Product(_Spec):
    kind: Literal["product"] = "product"


class ExpRatio(_Spec):
    kind: Literal["exp-ratio"] = "exp-ratio"


class ExpProduct(_Spec):
    kind: Literal["exp-product"] = "exp-product"


class ExpAlpha(_Spec):
    kind: Literal["exp-alpha"] = "exp-alpha"
    alpha: float

    @property
    def label(self) -> str:
        return f"exp-alpha(alpha={self.alpha:g})"


class Difference(_Spec):
    kind: Literal["difference"] = "difference"
    b: float

    @property
    def label(self) -> str:
        return f"difference(b={self.b:g})"


class General(_Spec):
    kind: Literal["general"] = "general"
    w1: float | None
    w2: float
    alpha: float | None
    eta: float
    theta: float
    member: str | None = None

    @property
    def free_parameters(self) -> tuple[str, ...]:
        return tuple(name for name in ("w1", "alpha") if getattr(self, name) is None)

    @property
    def label(self) -> str:
        if self.member:
            return f"member:{self.member}"
        return "general"


EstimatorSpec = Annotated[
    Union[MeanOnly, Ratio, Product, ExpRatio, ExpProduct, ExpAlpha, Difference, General],
    Field(discriminator="kind"),
]

estimator_spec_adapter: TypeAdapter = TypeAdapter(EstimatorSpec)


class MemberId(str, Enum):
    M1 = "m1"
    M2 = "m2"
    M3 = "m3"
    M4 = "m4"
    M5 = "m5"
    M6 = "m6"
    M7 = "m7"
    Q1 = "q1"
    Q2 = "q2"
    Q3 = "q3"
    Q4 = "q4"
    Q5 = "q5"
    Q6 = "q6"
    Q7 = "q7"
    Q8 = "q8"
    Q9 = "q9"

"""
Значения оценок среднего по выборке при известном X̄.

Ядро векторизовано (estimate_array): движок Монте-Карло считает сразу
все реплики. Скалярная evaluate: тонкая обёртка, которая вместо NaN
поднимает SingularDenominatorError с именем проблемного члена.
"""
from __future__ import annotations

import math

import numpy as np

from src.core.errors import InputValidationError, SingularDenominatorError, UnresolvedParameterError
from src.core.models.estimator import (
    Difference,
    EstimatorSpec,
    ExpAlpha,
    ExpProduct,
    ExpRatio,
    General,
    MeanOnly,
    MemberId,
    Product,
    Ratio,
)
from src.core.models.population import PopulationMoments
from src.core.models.sample import SampleStats
from src.services.members_catalog import MembersCatalog, get_members_catalog

TERM_RATIO = "x̄ в X̄/x̄"
TERM_POWER = "x̄ в (X̄/x̄)^alpha"
TERM_EXPONENT = "eta*(X̄+x̄) + 2*theta"


def _check_xbar_pop(xbar_pop: float) -> float:
    xbar_pop = float(xbar_pop)
    if not math.isfinite(xbar_pop) or xbar_pop <= 0:
        raise InputValidationError(f"X̄ должно быть положительным, получено {xbar_pop}")
    return xbar_pop


def _compute(spec: EstimatorSpec, xbar: np.ndarray, ybar: np.ndarray, X: float) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Значения оценки и маски вырожденных реплик по именам членов формулы."""
    failures: dict[str, np.ndarray] = {}
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if isinstance(spec, MeanOnly):
            values = ybar.copy()
        elif isinstance(spec, Ratio):
            failures[TERM_RATIO] = xbar == 0
            values = ybar * (X / xbar)
        elif isinstance(spec, Product):
            values = ybar * xbar / X
        elif isinstance(spec, ExpRatio):
            values = ybar * np.exp((X - xbar) / (X + xbar))
        elif isinstance(spec, ExpProduct):
            values = ybar * np.exp((xbar - X) / (xbar + X))
        elif isinstance(spec, ExpAlpha):
            # X̄ + x̄ >= X̄ > 0: знаменатель не вырождается ни при каком x̄
            values = ybar * np.exp(spec.alpha * (X - xbar) / (X + xbar))
        elif isinstance(spec, Difference):
            values = ybar + spec.b * (X - xbar)
        elif isinstance(spec, General):
            if spec.free_parameters:
                raise UnresolvedParameterError(
                    f"свободные параметры не разрешены: {', '.join(spec.free_parameters)}"
                )
            values = _general(spec, xbar, ybar, X, failures)
        else:
            raise InputValidationError(f"неизвестный тип оценки: {spec!r}")
    failed = np.zeros(values.shape, dtype=bool)
    for mask in failures.values():
        failed |= mask
    values = np.where(failed, np.nan, values)
    return values, failures


def _general(spec: General, xbar: np.ndarray, ybar: np.ndarray, X: float, failures: dict) -> np.ndarray:
    alpha = spec.alpha
    if alpha == 0:
        power = np.ones_like(xbar)
    else:
        # x̄ = 0 считается ошибкой и при alpha < 0, хотя предел там конечен
        zero = xbar == 0
        failures[TERM_POWER] = zero
        power = (X / np.where(zero, 1.0, xbar)) ** alpha
    if spec.eta == 0:
        # числитель показателя тождественно ноль: множитель exp отсутствует при любом theta
        factor = np.ones_like(xbar)
    else:
        denom = spec.eta * (X + xbar) + 2.0 * spec.theta
        failures[TERM_EXPONENT] = denom == 0
        safe_denom = np.where(denom == 0, 1.0, denom)
        factor = np.exp(spec.eta * (X - xbar) / safe_denom)
    return spec.w1 * ybar * power * factor + spec.w2 * xbar + (1.0 - spec.w1 - spec.w2) * X


def estimate_array(spec: EstimatorSpec, xbar, ybar, xbar_pop: float) -> tuple[np.ndarray, np.ndarray]:
    """(значения, маска неудачных); неудачные значения: NaN."""
    X = _check_xbar_pop(xbar_pop)
    xbar = np.asarray(xbar, dtype=np.float64)
    ybar = np.asarray(ybar, dtype=np.float64)
    values, _ = _compute(spec, xbar, ybar, X)
    return values, np.isnan(values)


def evaluate(spec: EstimatorSpec, stats: SampleStats, xbar_pop: float) -> float:
    X = _check_xbar_pop(xbar_pop)
    values, failures = _compute(spec, np.array([stats.xbar]), np.array([stats.ybar]), X)
    for term, mask in failures.items():
        if mask[0]:
            raise SingularDenominatorError(term)
    return float(values[0])


def _resolve_token(value, pop: PopulationMoments) -> float | None:
    if value == MembersCatalog.FREE:
        return None
    if value == MembersCatalog.RHO:
        return pop.rho
    if value == MembersCatalog.XBAR:
        return pop.xbar
    return float(value)


def resolve_named_member(
    member_id: MemberId | str,
    pop: PopulationMoments,
    catalog: MembersCatalog | None = None,
) -> General:
    """Именованный член семейства как General; w1 (и alpha у m3) остаются свободными (None)."""
    catalog = catalog or get_members_catalog()
    meta = catalog.get_meta(member_id)
    return General(
        w1=_resolve_token(meta["w1"], pop),
        w2=float(meta["w2"]),
        alpha=_resolve_token(meta["alpha"], pop),
        eta=_resolve_token(meta["eta"], pop),
        theta=_resolve_token(meta["theta"], pop),
        member=meta["id"],
    )


def _float_param(params: dict, key: str, allow_free: bool = False) -> float | None:
    if key not in params:
        raise InputValidationError(f"не задан параметр {key}")
    raw = params[key]
    if allow_free and (raw is None or str(raw).strip().lower() == MembersCatalog.FREE):
        return None
    try:
        value = float(str(raw).strip().replace(",", "."))
    except (TypeError, ValueError):
        raise InputValidationError(f"параметр {key} должен быть числом, получено {raw!r}") from None
    if not math.isfinite(value):
        raise InputValidationError(f"параметр {key} должен быть конечным, получено {raw!r}")
    return value


def spec_from_name(name: str, params: dict | None = None, pop: PopulationMoments | None = None) -> EstimatorSpec:
    """Разбор имени оценки CLI/HTTP: mean|ratio|...|general|member:<id>."""
    params = params or {}
    name = name.strip().lower()
    simple = {
        "mean": MeanOnly,
        "ratio": Ratio,
        "product": Product,
        "exp-ratio": ExpRatio,
        "exp-product": ExpProduct,
    }
    if name in simple:
        return simple[name]()
    if name == "exp-alpha":
        return ExpAlpha(alpha=_float_param(params, "alpha"))
    if name == "difference":
        return Difference(b=_float_param(params, "b"))
    if name == "general":
        return General(
            w1=_float_param(params, "w1", allow_free=True),
            w2=_float_param(params, "w2"),
            alpha=_float_param(params, "alpha", allow_free=True),
            eta=_float_param(params, "eta"),
            theta=_float_param(params, "theta"),
        )
    if name.startswith("member:"):
        if pop is None:
            raise InputValidationError("для члена семейства нужны параметры популяции")
        spec = resolve_named_member(name.split(":", 1)[1], pop)
        overrides = {k: _float_param(params, k) for k in ("w1", "alpha") if k in params}
        return spec.model_copy(update=overrides) if overrides else spec
    raise InputValidationError(f"неизвестная оценка: {name}")


def member_table(pop: PopulationMoments, catalog: MembersCatalog | None = None) -> list[dict]:
    """Строки каталога членов с подставленными ρ и X̄; свободные параметры помечены "free"."""
    catalog = catalog or get_members_catalog()
    rows = []
    for member_id in catalog.ids():
        spec = resolve_named_member(member_id, pop, catalog)
        row = {"member": member_id, "group": catalog.group_of(member_id)}
        for key in ("w1", "w2", "alpha", "eta", "theta"):
            value = getattr(spec, key)
            row[key] = MembersCatalog.FREE if value is None else value
        rows.append(row)
    return rows

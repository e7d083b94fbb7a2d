"""
Смещение и MSE первого порядка, оптимальные параметры, условия
эффективности и таблица PRE: в обеих конвенциях моментов.

Все частные формулы получаются подстановкой в общие параметрические формы
(экспоненциальный класс, разностная оценка, квадратичная форма t_m) с
моментами выбранной конвенции; опубликованные частные равенства
проверяются тестами, а не переписываются в код.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize

from src.core.errors import (
    DegenerateFormError,
    SingularDenominatorError,
)
from src.core.models.estimator import (
    Difference,
    EstimatorSpec,
    ExpAlpha,
    ExpProduct,
    ExpRatio,
    General,
    MeanOnly,
    Product,
    Ratio,
)
from src.core.models.population import (
    GammaTriple,
    MomentConvention,
    RelativeMoments,
    moments_from_gammas,
    relative_moments,
)
from src.core.models.reports import (
    AsPrintedComparison,
    EfficiencyCondition,
    EfficiencyReport,
    TheoryReport,
    TheoryRow,
    TmCoefficients,
)
from src.services.estimators import resolve_named_member
from src.services.members_catalog import MembersCatalog, get_members_catalog
from src.services.reference import PrintedReference, get_printed_reference

LABEL_AS_PRINTED = "as printed"
LABEL_UNVERIFIED = "as printed; derivation unverified"

# (γ1+γ3)² >= 4γ1γ3: t_k1 лучше ȳ
COND_EXP_RATIO = "exp-ratio"
# γ1+5γ3 >= -4γ3²/(γ1+γ3): t_k2 лучше ȳ
COND_EXP_PRODUCT = "exp-product"
# опубликованное неравенство превосходства t_m над t_R
COND_GENERAL = "general"

_TOL = 1e-12


def _m(g: GammaTriple, n: int, conv: MomentConvention) -> RelativeMoments:
    return relative_moments(g, n, MomentConvention(conv))


# ----------------------------------------------------------------------
# Экспоненциальный класс t_p и разностная оценка t_R
# ----------------------------------------------------------------------

def var_base(g: GammaTriple, n: int, conv: MomentConvention) -> float:
    """Var(ȳ) = Ȳ²·E(e0²): знаменатель PRE."""
    m = _m(g, n, conv)
    return g.lambda2 ** 2 * m.e00


def bias_exp_alpha(alpha: float, g: GammaTriple, n: int, conv: MomentConvention) -> float:
    m = _m(g, n, conv)
    return g.lambda2 * (alpha * (alpha + 2) / 8 * m.e11 - alpha / 2 * m.e01)


def mse_exp_alpha(alpha: float, g: GammaTriple, n: int, conv: MomentConvention) -> float:
    m = _m(g, n, conv)
    return g.lambda2 ** 2 * (m.e00 + alpha * alpha / 4 * m.e11 - alpha * m.e01)


def optimum_alpha(g: GammaTriple, conv: MomentConvention) -> float:
    m = _m(g, 1, conv)
    return 2 * m.e01 / m.e11


def _min_linear_mse(g: GammaTriple, n: int, conv: MomentConvention) -> float:
    # общее выражение минимумов t_p и t_R: Ȳ²(E(e0²) - E(e0e1)²/E(e1²))
    m = _m(g, n, conv)
    return g.lambda2 ** 2 * (m.e00 - m.e01 * m.e01 / m.e11)


def min_mse_exp(g: GammaTriple, n: int, conv: MomentConvention) -> float:
    return _min_linear_mse(g, n, conv)


def mse_difference(b: float, g: GammaTriple, n: int, conv: MomentConvention) -> float:
    m = _m(g, n, conv)
    Y, X = g.lambda2, g.lambda1
    return Y * Y * m.e00 + b * b * X * X * m.e11 - 2 * b * Y * X * m.e01


def optimum_b(g: GammaTriple, conv: MomentConvention) -> float:
    m = _m(g, 1, conv)
    return g.lambda2 * m.e01 / (g.lambda1 * m.e11)


def min_mse_difference(g: GammaTriple, n: int, conv: MomentConvention) -> float:
    return _min_linear_mse(g, n, conv)


# ----------------------------------------------------------------------
# Обобщённый класс t_m
# ----------------------------------------------------------------------

def tm_k(eta: float, theta: float, g: GammaTriple, conv: MomentConvention) -> float:
    """k из разложения множителя exp.

    AS_PRINTED: k = η/(2(ηX̄+θ)) буквально; CORRECTED: k = ηX̄/(2(ηX̄+θ)),
    как получается при относительной ошибке e1.
    """
    if eta == 0:
        return 0.0
    X = g.lambda1
    denom = eta * X + theta
    if denom == 0:
        raise SingularDenominatorError("eta*X̄ + theta")
    if MomentConvention(conv) is MomentConvention.AS_PRINTED:
        return eta / (2 * denom)
    return eta * X / (2 * denom)


def tm_coefficients(
    alpha: float,
    eta: float,
    theta: float,
    g: GammaTriple,
    n: int,
    conv: MomentConvention,
) -> TmCoefficients:
    m = _m(g, n, conv)
    Y, X = g.lambda2, g.lambda1
    k = tm_k(eta, theta, g, conv)
    a = alpha + k
    d_quad = 1.5 * k * k + alpha * k + alpha * (alpha + 1) / 2
    delta = Y - X
    return TmCoefficients(
        a=a,
        k=k,
        d_quad=d_quad,
        delta=delta,
        A=delta * delta + Y * Y * (m.e00 + a * a * m.e11 - 2 * a * m.e01),
        B=X * X * m.e11,
        C=Y * X * (m.e01 - a * m.e11),
    )


def optimum_weights(c: TmCoefficients, pin_w2: bool = False) -> tuple[float, float]:
    """Стационарная точка квадратичной формы; при pin_w2: минимум по w1 при w2 = 0."""
    d2 = c.delta * c.delta
    if pin_w2:
        if c.A <= 0:
            raise DegenerateFormError(f"A = {c.A} <= 0: вес w1 не определён")
        return d2 / c.A, 0.0
    det = c.determinant
    if not det > 0:
        raise DegenerateFormError(f"AB - C² = {det} <= 0: веса не определены")
    return d2 * c.B / det, -d2 * c.C / det


def min_mse_tm(c: TmCoefficients, pin_w2: bool = False) -> float:
    d2 = c.delta * c.delta
    if pin_w2:
        if c.A <= 0:
            raise DegenerateFormError(f"A = {c.A} <= 0: вес w1 не определён")
        value = d2 * (c.A - d2) / c.A
    else:
        det = c.determinant
        if not det > 0:
            raise DegenerateFormError(f"AB - C² = {det} <= 0: веса не определены")
        # δ²(1 - δ²B/det) в виде без вычитания близких чисел
        value = d2 * ((c.A - d2) * c.B - c.C * c.C) / det
    scale = max(d2, 1.0)
    if value < -_TOL * scale or value > d2 * (1 + _TOL) + _TOL:
        raise DegenerateFormError(f"минимум MSE {value} вне [0, δ² = {d2}]")
    return min(max(value, 0.0), d2)


def numerical_optimum_weights(c: TmCoefficients) -> tuple[float, float]:
    """Контроль замкнутых весов прямой двумерной минимизацией формы."""
    start = np.array([1.0, 0.0])
    result = minimize(
        lambda w: c.mse_at(w[0], w[1]),
        start,
        jac=lambda w: np.array([
            -2 * c.delta ** 2 + 2 * w[0] * c.A + 2 * w[1] * c.C,
            2 * w[1] * c.B + 2 * w[0] * c.C,
        ]),
        method="BFGS",
        options={"gtol": 1e-12, "maxiter": 1000},
    )
    return float(result.x[0]), float(result.x[1])


def min_mse_tm_as_printed(g: GammaTriple, n: int) -> float:
    """Опубликованная замкнутая форма минимума t_m, вычисленная буквально (d² = δ²)."""
    lambda1, lambda2 = g.lambda1, g.lambda2
    d2 = (lambda2 - lambda1) ** 2
    if d2 == 0:
        raise SingularDenominatorError("d²·n (δ = Ȳ - X̄ = 0)")
    inner = lambda1 * lambda2 - g.gamma2 ** 2
    denom = lambda1 + lambda2 ** 2 / (d2 * n) * inner
    if denom == 0:
        raise SingularDenominatorError("λ1 + λ2²(λ1λ2 - γ2²)/(d²n)")
    return lambda2 ** 2 * inner / denom


def tm_as_printed_comparison(g: GammaTriple, n: int, conv: MomentConvention) -> AsPrintedComparison:
    try:
        derived = min_mse_tm(tm_coefficients(1.0, 1.0, 0.0, g, n, conv))
    except DegenerateFormError:
        derived = None
    try:
        printed = min_mse_tm_as_printed(g, n)
    except SingularDenominatorError as e:
        return AsPrintedComparison(
            printed=None, derived=derived, discrepancy=None, comparable=False,
            note=f"not comparable: {e}",
        )
    if derived is None:
        return AsPrintedComparison(
            printed=printed, derived=None, discrepancy=None, comparable=False,
            note="not comparable: AB - C² <= 0",
        )
    return AsPrintedComparison(
        printed=printed, derived=derived, discrepancy=printed - derived, comparable=True,
    )


# ----------------------------------------------------------------------
# Общий диспетчер по EstimatorSpec
# ----------------------------------------------------------------------

def as_general(spec: EstimatorSpec) -> General | None:
    """Оценки, которые являются членами t_m (а не экспоненциального класса)."""
    if isinstance(spec, MeanOnly):
        return General(w1=1.0, w2=0.0, alpha=0.0, eta=0.0, theta=1.0)
    if isinstance(spec, Ratio):
        return General(w1=1.0, w2=0.0, alpha=1.0, eta=0.0, theta=1.0)
    if isinstance(spec, Product):
        return General(w1=1.0, w2=0.0, alpha=-1.0, eta=0.0, theta=1.0)
    if isinstance(spec, General):
        return spec
    return None


def resolve_free_parameters(spec: EstimatorSpec, g: GammaTriple, n: int, conv: MomentConvention) -> EstimatorSpec:
    """Свободные alpha и w1 заменяются их оптимумами первого порядка."""
    if not isinstance(spec, General) or not spec.free_parameters:
        return spec
    update: dict = {}
    alpha = spec.alpha
    if alpha is None:
        # a* = E(e0e1)/E(e1²) минимизирует Ȳ²(E(e0²) + a²E(e1²) - 2aE(e0e1))
        m = _m(g, n, conv)
        alpha = m.e01 / m.e11 - tm_k(spec.eta, spec.theta, g, conv)
        update["alpha"] = alpha
    if spec.w1 is None:
        c = tm_coefficients(alpha, spec.eta, spec.theta, g, n, conv)
        if c.A <= 0:
            raise DegenerateFormError(f"A = {c.A} <= 0: вес w1 не определён")
        update["w1"] = (c.delta * c.delta - spec.w2 * c.C) / c.A
    return spec.model_copy(update=update)


def _tm_bias(spec: General, c: TmCoefficients, g: GammaTriple, m: RelativeMoments) -> float:
    return (spec.w1 - 1) * c.delta + spec.w1 * g.lambda2 * (c.d_quad * m.e11 - c.a * m.e01)


def bias(spec: EstimatorSpec, g: GammaTriple, n: int, conv: MomentConvention) -> float:
    if isinstance(spec, MeanOnly) or isinstance(spec, Difference):
        return 0.0
    if isinstance(spec, ExpRatio):
        return bias_exp_alpha(1.0, g, n, conv)
    if isinstance(spec, ExpProduct):
        return bias_exp_alpha(-1.0, g, n, conv)
    if isinstance(spec, ExpAlpha):
        return bias_exp_alpha(spec.alpha, g, n, conv)
    general = resolve_free_parameters(as_general(spec), g, n, conv)
    c = tm_coefficients(general.alpha, general.eta, general.theta, g, n, conv)
    return _tm_bias(general, c, g, _m(g, n, conv))


def mse(spec: EstimatorSpec, g: GammaTriple, n: int, conv: MomentConvention) -> float:
    if isinstance(spec, MeanOnly):
        return var_base(g, n, conv)
    if isinstance(spec, ExpRatio):
        return mse_exp_alpha(1.0, g, n, conv)
    if isinstance(spec, ExpProduct):
        return mse_exp_alpha(-1.0, g, n, conv)
    if isinstance(spec, ExpAlpha):
        return mse_exp_alpha(spec.alpha, g, n, conv)
    if isinstance(spec, Difference):
        return mse_difference(spec.b, g, n, conv)
    general = resolve_free_parameters(as_general(spec), g, n, conv)
    c = tm_coefficients(general.alpha, general.eta, general.theta, g, n, conv)
    if general.w1 == 1 and general.w2 == 0:
        # при w1 = 1, w2 = 0 слагаемые δ² сокращаются; считаем без вычитания
        m = _m(g, n, conv)
        return g.lambda2 ** 2 * (m.e00 + c.a * c.a * m.e11 - 2 * c.a * m.e01)
    return c.mse_at(general.w1, general.w2)


def printed_bias(name: str, g: GammaTriple, n: int) -> float | None:
    """Напечатанные частные формулы смещения; только для сравнения."""
    Y = g.lambda2
    if name == "ratio":
        return Y * g.gamma1 / n
    if name == "exp-ratio":
        return Y * (3 * g.gamma1 - g.gamma3) / (8 * n)
    if name == "exp-product":
        return Y * (g.gamma1 + 5 * g.gamma3) / (8 * n)
    return None


# ----------------------------------------------------------------------
# Условия эффективности и таблица PRE
# ----------------------------------------------------------------------

def efficiency_report(g: GammaTriple, n: int, conv: MomentConvention) -> EfficiencyReport:
    conv = MomentConvention(conv)
    g1, g2, g3 = g.as_tuple()
    lambda1, lambda2 = g.lambda1, g.lambda2
    d2 = (lambda2 - lambda1) ** 2
    best_linear = min_mse_exp(g, n, conv)

    def _holds(diff: float, scale: float) -> bool:
        return diff >= -_TOL * max(abs(scale), 1.0)

    k1_gap = mse_exp_alpha(1.0, g, n, conv) - best_linear
    k2_gap = mse_exp_alpha(-1.0, g, n, conv) - best_linear
    try:
        tm_gap = best_linear - min_mse_tm(tm_coefficients(1.0, 1.0, 0.0, g, n, conv))
        tm_holds = _holds(tm_gap, best_linear)
    except DegenerateFormError:
        tm_gap, tm_holds = None, None

    lhs_ratio, rhs_ratio = lambda1 ** 2, 4 * g1 * g3
    lhs_product, rhs_product = g1 + 5 * g3, -4 * g3 * g3 / lambda1
    lhs_general = lambda2 ** 2 * (lambda1 * lambda2 - g2 * g2)
    rhs_general = (n - 1) * lambda1 * d2 * n
    return EfficiencyReport(
        convention=conv,
        conditions=[
            EfficiencyCondition(
                name=COND_EXP_RATIO, lhs=lhs_ratio, rhs=rhs_ratio,
                holds=lhs_ratio >= rhs_ratio, label=LABEL_AS_PRINTED,
                mse_difference=k1_gap, mse_difference_holds=_holds(k1_gap, best_linear),
            ),
            EfficiencyCondition(
                name=COND_EXP_PRODUCT, lhs=lhs_product, rhs=rhs_product,
                holds=lhs_product >= rhs_product, label=LABEL_AS_PRINTED,
                mse_difference=k2_gap, mse_difference_holds=_holds(k2_gap, best_linear),
            ),
            EfficiencyCondition(
                name=COND_GENERAL, lhs=lhs_general, rhs=rhs_general,
                holds=lhs_general >= rhs_general, label=LABEL_UNVERIFIED,
                mse_difference=tm_gap, mse_difference_holds=tm_holds,
            ),
        ],
    )


def _pre(base: float, value: float) -> float:
    return 100.0 * base / value if value > 0 else math.inf


def _row(
    name: str,
    spec: EstimatorSpec,
    g: GammaTriple,
    n: int,
    conv: MomentConvention,
    base: float,
    printed: float | None = None,
    note: str | None = None,
    mse_value: float | None = None,
) -> TheoryRow:
    spec = resolve_free_parameters(spec, g, n, conv)
    value = mse(spec, g, n, conv) if mse_value is None else mse_value
    return TheoryRow(
        estimator=name,
        spec=spec,
        bias=bias(spec, g, n, conv),
        mse=value,
        pre=_pre(base, value),
        printed_pre=printed,
        note=note,
    )


def _bias_note(key: str, spec: EstimatorSpec, g: GammaTriple, n: int) -> str | None:
    printed = printed_bias(key, g, n)
    if printed is None:
        return None
    generic_as_printed = bias(spec, g, n, MomentConvention.AS_PRINTED)
    if math.isclose(printed, generic_as_printed, rel_tol=1e-9, abs_tol=1e-15):
        return None
    return (
        f"напечатанное смещение {printed:.6g} расходится с общей формой "
        f"{generic_as_printed:.6g} (as-printed); используется общая форма"
    )


def pre_table(
    g: GammaTriple,
    n: int,
    conv: MomentConvention,
    catalog: MembersCatalog | None = None,
    reference: PrintedReference | None = None,
) -> TheoryReport:
    conv = MomentConvention(conv)
    catalog = catalog or get_members_catalog()
    reference = reference or get_printed_reference()
    base = var_base(g, n, conv)
    alpha_star = optimum_alpha(g, conv)
    b_star = optimum_b(g, conv)

    rows = [
        _row("ybar", MeanOnly(), g, n, conv, base, reference.pre("mean")),
        _row("t_r", Ratio(), g, n, conv, base, reference.pre("ratio"), _bias_note("ratio", Ratio(), g, n)),
        _row("t_k1", ExpRatio(), g, n, conv, base, reference.pre("exp-ratio"),
             _bias_note("exp-ratio", ExpRatio(), g, n)),
        _row("t_k2", ExpProduct(), g, n, conv, base, reference.pre("exp-product"),
             _bias_note("exp-product", ExpProduct(), g, n)),
        _row("t_p", ExpAlpha(alpha=alpha_star), g, n, conv, base, reference.pre("exp-alpha-optimum"),
             mse_value=min_mse_exp(g, n, conv)),
        _row("t_R", Difference(b=b_star), g, n, conv, base, reference.pre("difference-optimum"),
             mse_value=min_mse_difference(g, n, conv)),
    ]

    # минимум не зависит от (alpha, eta, theta): AB - C² от a не зависит
    c = tm_coefficients(1.0, 1.0, 0.0, g, n, conv)
    try:
        w1, w2 = optimum_weights(c)
        rows.append(_row(
            "t_m", General(w1=w1, w2=w2, alpha=1.0, eta=1.0, theta=0.0), g, n, conv, base,
            reference.pre("general-optimum"), mse_value=min_mse_tm(c),
        ))
    except DegenerateFormError as e:
        rows.append(TheoryRow(
            estimator="t_m", spec=General(w1=None, w2=0.0, alpha=1.0, eta=1.0, theta=0.0),
            bias=math.nan, mse=math.nan, pre=math.nan, note=str(e),
        ))

    pop = moments_from_gammas(g)
    members = []
    for member_id in catalog.ids():
        spec = resolve_named_member(member_id, pop, catalog)
        note = catalog.get_meta(member_id).get("note")
        try:
            members.append(_row(member_id, spec, g, n, conv, base, note=note))
        except (SingularDenominatorError, DegenerateFormError) as e:
            members.append(TheoryRow(
                estimator=member_id, spec=spec, bias=math.nan, mse=math.nan, pre=math.nan, note=str(e),
            ))

    annotations = [
        "printed PRE column: " + ", ".join(f"{k}={v:.2f}" for k, v in reference.pre_items().items())
        + " (not reproduced from the printed gammas)",
        *reference.notes(),
        reference.rho_annotation(),
    ]
    return TheoryReport(
        gammas=g,
        n=n,
        convention=conv,
        base_variance=base,
        rows=rows,
        members=members,
        efficiency=efficiency_report(g, n, conv),
        tm_as_printed=tm_as_printed_comparison(g, n, conv),
        annotations=annotations,
    )



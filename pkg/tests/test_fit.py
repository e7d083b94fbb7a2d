import math

import numpy as np
import pytest

from src.core.errors import InfeasibleMomentsError, InputValidationError, InsufficientDataError
from src.core.math.rng import poisson_array, stream_for
from src.core.math.special import chi_square_sf
from src.core.models.population import GammaTriple
from src.core.models.sample import Sample, SeedSpec
from src.services.fit import MIN_EXPECTED, fit_gammas, pearson_chi2, poisson_gof
from src.services.synth import draw_bivariate_sample


# ----------------------------------------------------------------------
# Оценивание γ методом моментов
# ----------------------------------------------------------------------

def test_fit_hand_example():
    """
    Сценарий: {(2,2),(3,3),(4,4)}
    Ожидание: γ = (2, 2, 1); асимптотическая SE(γ̂1) = √((λ1 + λ1λ2 + γ3² - γ3)/n) = 2
    """
    result = fit_gammas(Sample.from_pairs([(2, 2), (3, 3), (4, 4)]))
    assert result.gammas.as_tuple() == (2.0, 2.0, 1.0)
    assert (result.lambda1, result.lambda2) == (3.0, 3.0)
    assert result.rho == pytest.approx(1 / 3)
    assert result.standard_errors[0] == pytest.approx(2.0)
    assert result.standard_errors[2] == pytest.approx(math.sqrt(11 / 3))
    assert not result.clamped and result.warnings == []


def test_fit_independent_data():
    """
    Сценарий: sxy = 0
    Ожидание: (x̄, ȳ, 0)
    """
    result = fit_gammas(Sample.from_pairs([(1, 3), (3, 3), (1, 5), (3, 5)]))
    assert result.gammas.as_tuple() == (2.0, 4.0, 0.0)
    assert result.rho == 0.0


def test_fit_recovers_truth(gammas):
    """
    Сценарий: 10^6 пар при γ из примера
    Ожидание: каждая компонента в пределах 4 асимптотических SE от истинной
    """
    s = draw_bivariate_sample(gammas, 1_000_000, SeedSpec(master_seed=31))
    result = fit_gammas(s)
    for estimate, truth, se in zip(result.gammas.as_tuple(), gammas.as_tuple(), result.standard_errors):
        assert abs(estimate - truth) <= 4 * se


def test_fit_infeasible_without_clamp():
    """
    Сценарий: sxy > x̄ (пары (0,0), (0,0), (10,10))
    Ожидание: InfeasibleMomentsError
    """
    with pytest.raises(InfeasibleMomentsError):
        fit_gammas(Sample.from_pairs([(0, 0), (0, 0), (10, 10)]))


def test_fit_clamp():
    """
    Сценарий: та же выборка с clamp
    Ожидание: γ1 = γ2 = 0, γ3 = sxy; два предупреждения
    """
    result = fit_gammas(Sample.from_pairs([(0, 0), (0, 0), (10, 10)]), clamp=True)
    assert result.clamped
    assert result.gammas.gamma1 == 0 and result.gammas.gamma2 == 0
    assert result.gammas.gamma3 == pytest.approx(100 / 3)
    assert len(result.warnings) == 2
    assert all("gamma" in w for w in result.warnings)


def test_fit_negative_covariance():
    """
    Сценарий: отрицательная выборочная ковариация
    Ожидание: без clamp нарушена граница cov >= 0; с clamp γ3 = 0
    """
    s = Sample.from_pairs([(0, 2), (2, 0), (1, 1)])
    with pytest.raises(InfeasibleMomentsError) as e:
        fit_gammas(s)
    assert e.value.bound == "cov >= 0"
    clamped = fit_gammas(s, clamp=True)
    assert clamped.gammas.gamma3 == 0
    assert clamped.gammas.gamma1 == pytest.approx(2.0)


def test_fit_too_small():
    with pytest.raises(InsufficientDataError):
        fit_gammas(Sample.from_pairs([(1, 1)]))


def test_fit_degenerate_marginal():
    with pytest.raises(InputValidationError):
        fit_gammas(Sample.from_pairs([(0, 1), (0, 2), (0, 3)]))


def test_fit_result_is_valid_triple():
    """
    Сценарий: 200 маленьких случайных выборок с clamp
    Ожидание: результат всегда допустимая тройка либо InfeasibleMomentsError
    """
    rng = np.random.default_rng(41)
    for _ in range(200):
        x = rng.poisson(2.0, 5)
        y = rng.poisson(3.0, 5)
        try:
            result = fit_gammas(Sample(x, y), clamp=True)
        except (InfeasibleMomentsError, InputValidationError):
            continue
        assert all(v >= 0 for v in result.gammas.as_tuple())
        assert isinstance(result.gammas, GammaTriple)


# ----------------------------------------------------------------------
# Хвост χ² и статистика Пирсона
# ----------------------------------------------------------------------

@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
def test_chi_square_sf_two_df(x):
    """
    Сценарий: df = 2
    Ожидание: e^(-x/2)
    """
    assert chi_square_sf(x, 2) == pytest.approx(math.exp(-x / 2), abs=1e-12)


def test_chi_square_sf_reference_points():
    """
    Сценарий: sf(3.841, 1); sf(0, k)
    Ожидание: ≈ 0.05; ровно 1
    """
    assert chi_square_sf(3.841, 1) == pytest.approx(0.05, abs=1e-3)
    for k in (1, 2, 7, 30):
        assert chi_square_sf(0.0, k) == 1.0


def test_chi_square_sf_monotone():
    """
    Сценарий: сетка x и df
    Ожидание: убывает по x; растёт по df
    """
    xs = np.linspace(0.0, 40.0, 81)
    for df in (1, 2, 5, 10):
        values = [chi_square_sf(x, df) for x in xs]
        assert all(a >= b for a, b in zip(values, values[1:]))
    for x in (3.0, 12.0, 25.0):
        values = [chi_square_sf(x, df) for df in range(1, 20)]
        assert all(a <= b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("x, df", [(1.0, 0), (1.0, 1.5), (1.0, True), (-0.1, 2), (math.nan, 2)])
def test_chi_square_sf_invalid(x, df):
    with pytest.raises(InputValidationError):
        chi_square_sf(x, df)


def test_pearson_chi2_exact_fit():
    """
    Сценарий: наблюдаемые частоты равны ожидаемым
    Ожидание: χ² = 0, p = 1
    """
    chi2 = pearson_chi2([10, 20, 30], [10.0, 20.0, 30.0])
    assert chi2 == 0.0
    assert chi_square_sf(chi2, 1) == 1.0


def test_pearson_chi2_mismatch():
    with pytest.raises(InputValidationError):
        pearson_chi2([1, 2], [1.0, 0.0])
    with pytest.raises(InputValidationError):
        pearson_chi2([1, 2, 3], [1.0, 2.0])


# ----------------------------------------------------------------------
# Критерий согласия с законом Пуассона
# ----------------------------------------------------------------------

def test_gof_bins():
    """
    Сценарий: 10^4 значений Po(5)
    Ожидание: ожидаемые частоты всех ячеек >= 5; суммы частот равны N; df = ячеек - 2
    """
    values = poisson_array(5.0, 10_000, stream_for(51, 0))
    report = poisson_gof(values)
    assert all(b.expected >= MIN_EXPECTED for b in report.bins)
    assert sum(b.observed for b in report.bins) == 10_000
    assert sum(b.expected for b in report.bins) == pytest.approx(10_000)
    assert report.df == len(report.bins) - 2
    assert report.bins[-1].high is None
    assert report.lambda_hat == pytest.approx(values.mean())


def test_gof_degenerate():
    """
    Сценарий: десять нулей
    Ожидание: вырожденный отчёт, χ² = 0, p = 1
    """
    report = poisson_gof([0] * 10)
    assert report.degenerate
    assert (report.chi2, report.pvalue) == (0.0, 1.0)
    assert report.note


@pytest.mark.parametrize("values", [[3] * 10, [0] * 9 + [1]])
def test_gof_single_cell_is_degenerate(values):
    """
    Сценарий: после объединения ячеек остаётся одна
    Ожидание: отчёт помечен вырожденным и несёт пояснение, а не выдаёт идеальное согласие
    """
    report = poisson_gof(values)
    assert len(report.bins) == 1
    assert report.degenerate
    assert "одна ячейка" in report.note


def test_gof_too_few():
    with pytest.raises(InsufficientDataError):
        poisson_gof([1] * 9)


@pytest.mark.parametrize("values", [[1.5] * 10, [-1] + [1] * 9])
def test_gof_invalid_counts(values):
    with pytest.raises(InputValidationError):
        poisson_gof(values)


def test_gof_rejects_geometric():
    """
    Сценарий: 10^4 значений геометрического закона со средним 4
    Ожидание: p < 0.001
    """
    values = np.random.default_rng(61).geometric(0.2, 10_000) - 1
    assert poisson_gof(values).pvalue < 0.001


@pytest.mark.slow
def test_gof_calibration():
    """
    Сценарий: 2000 наборов по 500 значений Po(5)
    Ожидание: доля отвержений на уровне 5% лежит в [3%, 8%]
    """
    seeds = 2000
    rejected = sum(
        poisson_gof(poisson_array(5.0, 500, stream_for(seed, 0))).pvalue < 0.05
        for seed in range(seeds)
    )
    assert 0.03 <= rejected / seeds <= 0.08

import math

import numpy as np
import pytest

from src.core.errors import InputValidationError, InsufficientDataError
from src.core.math.rng import poisson_array, poisson_draw, stream_for
from src.core.models.population import GammaTriple
from src.core.models.sample import Sample, SeedSpec
from src.services.fit import poisson_gof
from src.services.settings import get_settings
from src.services.synth import (
    draw_bivariate_sample,
    generate_finite_population,
    sample_stats,
    srswor,
    srswor_indices,
)


def test_poisson_zero_rate():
    """
    Сценарий: λ = 0
    Ожидание: всегда 0
    """
    stream = stream_for(1, 0)
    assert all(poisson_draw(0.0, stream) == 0 for _ in range(100))
    assert not poisson_array(0.0, 50, stream).any()


@pytest.mark.parametrize("lam", [-1.0, math.nan, math.inf])
def test_poisson_invalid_rate(lam):
    with pytest.raises(InputValidationError):
        poisson_draw(lam, stream_for(1, 0))


def test_poisson_mean_and_zero_mass():
    """
    Сценарий: 10^6 значений Po(5) и Po(2)
    Ожидание: среднее в пределах 4 стандартных ошибок от 5; P(X=0): от e^-2
    """
    size = 1_000_000
    draws = poisson_array(5.0, size, stream_for(3, 0))
    assert abs(draws.mean() - 5.0) <= 4 * math.sqrt(5.0 / size)
    draws = poisson_array(2.0, size, stream_for(3, 1))
    p0 = math.exp(-2.0)
    assert abs(np.mean(draws == 0) - p0) <= 4 * math.sqrt(p0 * (1 - p0) / size)


def test_poisson_large_rate_exact_law():
    """
    Сценарий: λ = 50 (ветка отбраковывания)
    Ожидание: критерий согласия не отвергает пуассоновость на уровне 0.1%
    """
    draws = poisson_array(50.0, 100_000, stream_for(5, 0))
    assert poisson_gof(draws).pvalue > 0.001


def test_shared_component_only():
    """
    Сценарий: γ = (0, 0, 3)
    Ожидание: в каждой паре x = y
    """
    s = draw_bivariate_sample(GammaTriple(gamma1=0, gamma2=0, gamma3=3), 1000, SeedSpec(master_seed=1))
    assert np.array_equal(s.x, s.y)


def test_sample_determinism_independent_of_workers(gammas):
    """
    Сценарий: одна и та же тройка и зерно при 1 и 4 потоках, блок 1000
    Ожидание: выборки совпадают бит в бит
    """
    seed = SeedSpec(master_seed=2024)
    a = draw_bivariate_sample(gammas, 10_500, seed, record_block=1000, workers=1)
    b = draw_bivariate_sample(gammas, 10_500, seed, record_block=1000, workers=4)
    assert a == b
    c = draw_bivariate_sample(gammas, 10_500, SeedSpec(master_seed=2025), record_block=1000)
    assert a != c


def test_record_block_from_settings(gammas):
    """
    Сценарий: размер блока не задан; задан как в defaults.json; задан меньше
    Ожидание: без параметра берётся блок из настроек; другой блок даёт другие потоки
    """
    seed = SeedSpec(master_seed=7)
    configured = get_settings().record_block
    default = draw_bivariate_sample(gammas, 1000, seed)
    assert default == draw_bivariate_sample(gammas, 1000, seed, record_block=configured)
    assert default != draw_bivariate_sample(gammas, 1000, seed, record_block=100)
    with pytest.raises(InputValidationError):
        draw_bivariate_sample(gammas, 1000, seed, record_block=0)


def test_sample_covariance_example(gammas):
    """
    Сценарий: 10^6 пар при γ из примера
    Ожидание: выборочная ковариация в пределах 4 стандартных ошибок от γ3
    """
    n = 1_000_000
    stats = sample_stats(draw_bivariate_sample(gammas, n, SeedSpec(master_seed=99)), require_second_moments=True)
    l1, l2, g3 = gammas.lambda1, gammas.lambda2, gammas.gamma3
    se = math.sqrt((l1 * l2 + g3 * g3 + g3) / n)
    assert abs(stats.sxy - g3) <= 4 * se


def test_independent_marginals():
    """
    Сценарий: γ3 = 0, 10^6 пар
    Ожидание: выборочная корреляция в пределах 4/√n от нуля
    """
    n = 1_000_000
    s = draw_bivariate_sample(GammaTriple(gamma1=2, gamma2=3, gamma3=0), n, SeedSpec(master_seed=5))
    stats = sample_stats(s, require_second_moments=True)
    corr = stats.sxy / math.sqrt(stats.s2x * stats.s2y)
    assert abs(corr) <= 4 / math.sqrt(n)


def test_marginals_are_poisson(gammas):
    """
    Сценарий: 10^5 пар
    Ожидание: маргинали x и y согласуются с пуассоновским законом на уровне 0.1%
    """
    s = draw_bivariate_sample(gammas, 100_000, SeedSpec(master_seed=8))
    assert poisson_gof(s.x).pvalue > 0.001
    assert poisson_gof(s.y).pvalue > 0.001


def test_finite_population():
    """
    Сценарий: N = 1; одно зерно дважды; N = 10^5 при γ = (1, 1, 1)
    Ожидание: одна пара; одинаковые популяции; среднее x в пределах 4·√(2/N) от 2
    """
    g = GammaTriple(gamma1=1, gamma2=1, gamma3=1)
    assert generate_finite_population(g, 1, SeedSpec(master_seed=1)).n == 1
    a = generate_finite_population(g, 100_000, SeedSpec(master_seed=3))
    b = generate_finite_population(g, 100_000, SeedSpec(master_seed=3))
    assert a == b
    assert abs(a.x.mean() - 2.0) <= 4 * math.sqrt(2 / 100_000)


def test_srswor_census(gammas):
    """
    Сценарий: n = N
    Ожидание: вся популяция (как мультимножество)
    """
    pop = generate_finite_population(gammas, 50, SeedSpec(master_seed=4))
    s = srswor(pop, 50, SeedSpec(master_seed=9))
    assert sorted(s.pairs) == sorted(pop.pairs)


def test_srswor_inclusion_probability():
    """
    Сценарий: n = 1 из N = 10, 10^5 повторений
    Ожидание: каждая единица выбрана в 10% ± 4 стандартные ошибки случаев
    """
    reps = 100_000
    stream = stream_for(17, 3)
    counts = np.zeros(10)
    for _ in range(reps):
        counts[srswor_indices(10, 1, stream)] += 1
    se = math.sqrt(0.1 * 0.9 / reps)
    assert np.all(np.abs(counts / reps - 0.1) <= 4 * se)


@pytest.mark.parametrize("n", [0, 11])
def test_srswor_invalid_size(n):
    with pytest.raises(InputValidationError):
        srswor_indices(10, n, stream_for(1, 3))


def test_sample_stats_hand_example():
    """
    Сценарий: {(2,2),(3,3),(4,4)}
    Ожидание: x̄ = ȳ = 3, s2x = 1, sxy = 1
    """
    stats = sample_stats(Sample.from_pairs([(2, 2), (3, 3), (4, 4)]))
    assert (stats.xbar, stats.ybar, stats.s2x, stats.sxy) == (3.0, 3.0, 1.0, 1.0)


def test_sample_stats_single_pair():
    """
    Сценарий: {(5,7)}
    Ожидание: средние есть, дисперсий нет; требование вторых моментов: ошибка
    """
    s = Sample.from_pairs([(5, 7)])
    stats = sample_stats(s)
    assert (stats.xbar, stats.ybar) == (5.0, 7.0)
    assert not stats.has_second_moments
    with pytest.raises(InsufficientDataError):
        sample_stats(s, require_second_moments=True)


def test_sample_stats_constant():
    stats = sample_stats(Sample.from_pairs([(3, 1)] * 10))
    assert stats.s2x == stats.s2y == stats.sxy == 0.0


def test_sample_rejects_negative_counts():
    with pytest.raises(ValueError):
        Sample.from_pairs([(1, -1)])


def test_sample_owns_its_arrays():
    """
    Сценарий: выборка из массивов numpy, затем исходный массив меняется
    Ожидание: выборка не меняется и сама запрещает запись
    """
    x = np.array([1, 2, 3])
    y = np.array([4, 5, 6])
    s = Sample(x, y)
    x[0] = 99
    y[:] = 0
    assert s.x.tolist() == [1, 2, 3]
    assert s.y.tolist() == [4, 5, 6]
    with pytest.raises(ValueError):
        s.x[0] = 7

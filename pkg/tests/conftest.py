"""Общие фикстуры pytest для оценок среднего пуассоновской популяции."""
import sys
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

# Корень репозитория: родитель каталога tests/
PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from backend.main import app  # noqa: E402
from src.core.models.population import GammaTriple, MomentConvention  # noqa: E402
from src.core.models.reports import McConfig  # noqa: E402

# Тройка γ и объём выборки опубликованного примера
EXAMPLE_GAMMAS = (4.1813, 8.104, 2.112)
EXAMPLE_N = 20


@pytest.fixture
def gammas() -> GammaTriple:
    return GammaTriple(gamma1=EXAMPLE_GAMMAS[0], gamma2=EXAMPLE_GAMMAS[1], gamma3=EXAMPLE_GAMMAS[2])


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def mc_config(gammas):
    def make(n=200, replicates=20000, seed=12345, convention=MomentConvention.CORRECTED, **kw):
        return McConfig(
            gammas=kw.pop("g", gammas), n=n, replicates=replicates, master_seed=seed,
            convention=convention, **kw,
        )
    return make

import pytest

from src import APP_VERSION

EXAMPLE = {"gamma1": 4.1813, "gamma2": 8.104, "gamma3": 2.112}


def test_get_health(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": APP_VERSION}


def test_get_members(client):
    """
    Сценарий: GET /api/members без параметров
    Ожидание: 16 членов, ρ и X̄ опубликованного примера подставлены
    """
    response = client.get("/api/members")
    assert response.status_code == 200
    data = response.json()
    assert len(data) == 16
    q3 = next(m for m in data if m["member"] == "q3")
    assert q3["theta"] == pytest.approx(6.2933)
    assert q3["w1"] == "free"


def test_get_members_invalid_gammas(client):
    response = client.get("/api/members", params={"gamma1": 0, "gamma3": 0})
    assert response.status_code == 400


def test_post_pre_table(client):
    """
    Сценарий: POST /api/theory/pre-table, as-printed, n = 20
    Ожидание: PRE(t_k1) ≈ 105.566, строки членов семейства, аннотации
    """
    response = client.post("/api/theory/pre-table", json={"gammas": EXAMPLE, "n": 20, "convention": "as-printed"})
    assert response.status_code == 200
    data = response.json()
    pre = {r["estimator"]: r["pre"] for r in data["rows"]}
    assert pre["t_k1"] == pytest.approx(105.566, abs=0.01)
    assert len(data["members"]) == 16
    assert data["annotations"]


def test_post_efficiency(client):
    response = client.post("/api/theory/efficiency", json={"gammas": EXAMPLE})
    assert response.status_code == 200
    conditions = response.json()["conditions"]
    assert [c["holds"] for c in conditions[:2]] == [True, True]
    assert conditions[2]["label"] == "as printed; derivation unverified"


def test_post_pre_table_invalid_body(client):
    response = client.post("/api/theory/pre-table", json={"gammas": {"gamma1": -1, "gamma2": 1, "gamma3": 1}})
    assert response.status_code == 422


def test_post_fit_pairs(client):
    """
    Сценарий: POST /api/fit с тремя парами
    Ожидание: γ = (2, 2, 1), критерий согласия не считается
    """
    response = client.post("/api/fit", json={"pairs": [[2, 2], [3, 3], [4, 4]]})
    assert response.status_code == 200
    data = response.json()
    assert data["fit"]["gammas"] == {"gamma1": 2.0, "gamma2": 2.0, "gamma3": 1.0}
    assert data["gof"] == {"x": None, "y": None}


def test_post_fit_csv(client):
    response = client.post("/api/fit", json={"csv": "x,y\n2,2\n3,3\n4,4\n"})
    assert response.status_code == 200
    assert response.json()["fit"]["n"] == 3


@pytest.mark.parametrize("body", [
    {},
    {"pairs": [[1, 1]], "csv": "1,1"},
    {"pairs": []},
    {"pairs": [[1, -1], [2, 2]]},
    {"csv": "1,a\n"},
    {"pairs": [[0, 0], [0, 0], [10, 10]]},
])
def test_post_fit_errors(client, body):
    """
    Сценарий: нет данных, оба поля, пустой список, отрицательный счётчик, битый CSV, недопустимые моменты
    Ожидание: 400
    """
    assert client.post("/api/fit", json=body).status_code == 400


def test_post_simulate(client):
    """
    Сценарий: POST /api/simulate для Difference{0.33559}, n = 50
    Ожидание: отчёт, вердикты по смещению, воспроизводимость по зерну
    """
    body = {
        "gammas": EXAMPLE, "n": 50, "replicates": 2000, "seed": 5,
        "estimator": "difference", "params": {"b": 0.33559},
    }
    first = client.post("/api/simulate", json=body)
    assert first.status_code == 200
    data = first.json()
    assert data["report"]["replicates"] == 2000
    assert {v["source"] for v in data["bias_verdicts"]} == {"generic-corrected", "generic-as-printed"}
    assert client.post("/api/simulate", json=body).json() == data


def test_post_simulate_quality_conflict(client):
    body = {
        "gammas": {"gamma1": 0.05, "gamma2": 1, "gamma3": 0}, "n": 2, "replicates": 2000,
        "estimator": "ratio",
    }
    assert client.post("/api/simulate", json=body).status_code == 409


def test_post_simulate_bad_estimator(client):
    body = {"gammas": EXAMPLE, "estimator": "bogus"}
    assert client.post("/api/simulate", json=body).status_code == 400

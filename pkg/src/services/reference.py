from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from src.core.models.population import GammaTriple, moments_from_gammas
from src.infrastructure.config_loader import load_validated


class PrintedReference:
    """Опубликованный численный пример и его колонка PRE; только для аннотаций, не для проверок."""

    def __init__(self, directory: Path | None = None):
        data = load_validated("printed_reference.json", "printed_reference.schema.json", directory)
        self._data = data

    @property
    def gammas(self) -> GammaTriple:
        return GammaTriple(**self._data["gammas"])

    @property
    def sample_size(self) -> int:
        return int(self._data["sample_size"])

    @property
    def rho(self) -> float:
        return float(self._data["rho"])

    def pre(self, key: str) -> float | None:
        value = self._data["pre"].get(key)
        return None if value is None else float(value)

    def pre_items(self) -> dict[str, float]:
        return dict(self._data["pre"])

    def goodness_of_fit(self) -> list[dict]:
        return list(self._data.get("goodness_of_fit", []))

    def notes(self) -> list[str]:
        return list(self._data["notes"])

    def rho_annotation(self) -> str:
        """Напечатанное ρ рядом с ρ, которое следует из напечатанных γ."""
        derived = moments_from_gammas(self.gammas).rho
        return (
            f"Напечатано rho = {self.rho:g} (n = {self.sample_size}); "
            f"из напечатанных γ получается rho ≈ {derived:.3f}"
        )


@lru_cache
def get_printed_reference() -> PrintedReference:
    return PrintedReference()

from __future__ import annotations

import math

from scipy.special import gammaincc

from src.core.errors import InputValidationError


def chi_square_sf(x: float, df: int) -> float:
    """P(χ²_df >= x) через регуляризованную верхнюю неполную гамму Q(df/2, x/2)."""
    if isinstance(df, bool) or int(df) != df or df < 1:
        raise InputValidationError(f"число степеней свободы должно быть целым >= 1, получено {df}")
    x = float(x)
    if math.isnan(x) or x < 0:
        raise InputValidationError(f"статистика χ² должна быть >= 0, получено {x}")
    if x == 0:
        return 1.0
    p = float(gammaincc(int(df) / 2.0, x / 2.0))
    return min(max(p, 0.0), 1.0)

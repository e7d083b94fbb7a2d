"""Вывод отчётов: один JSON-документ или TSV (заголовок + строки) в фиксированном порядке колонок."""
import json
import math
from typing import Any, Iterable, Sequence

from pydantic import BaseModel

FLOAT_FORMAT = ".10g"


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return _plain(value.model_dump(mode="python"))
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_json(document: Any) -> str:
    """Ключи: имена полей моделей; нечисловые значения (nan, inf): null."""
    return json.dumps(_plain(document), ensure_ascii=False, indent=2, allow_nan=False) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if not math.isfinite(value) else format(value, FLOAT_FORMAT)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return str(value).replace("\t", " ").replace("\n", " ")


def to_tsv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(_cell(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"

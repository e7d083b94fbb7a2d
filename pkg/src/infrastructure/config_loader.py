import json
from pathlib import Path

from jsonschema import Draft202012Validator

from src.core.errors import ConfigError
from src.infrastructure.paths import config_dir, schema_dir


def read_json(path: Path) -> dict:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if not isinstance(data, dict):
        raise ConfigError(f"Ожидался JSON-объект в {path}")
    return data


def load_validated(filename: str, schema_name: str, directory: Path | None = None) -> dict:
    """Читает config/<filename> и проверяет его по schema/<schema_name>."""
    path = (directory or config_dir()) / filename
    if not path.is_file():
        raise FileNotFoundError(f"Не найден конфиг: {path}")
    data = read_json(path)
    schema = read_json(schema_dir() / schema_name)
    errors = sorted(Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<корень>"
        raise ConfigError(f"{path.name}: {where}: {first.message}")
    return data

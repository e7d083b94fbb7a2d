from typing import Any

from fastapi import Response

from src.infrastructure.report_writer import to_json


def json_response(document: Any, status_code: int = 200) -> Response:
    """JSON отчёта тем же сериализатором, что и CLI (nan/inf -> null)."""
    return Response(content=to_json(document), media_type="application/json", status_code=status_code)

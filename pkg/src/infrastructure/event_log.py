"""
Структурированный журнал событий.

Каждое событие пишется одним JSON-объектом в строке: event.name + event.category +
event.action, результат, длительность и счётчики. Имя события стабильно,
старт/финиш/ошибка различаются через event_action и result_ok.
"""
from __future__ import annotations

import json
import logging
import time
import uuid
from contextlib import contextmanager

from src import APP_ID, APP_VERSION

LOGGER_NAME = "poisson_estimators.events"


class EventLog:
    def __init__(self, app_id: str = APP_ID, app_version: str = APP_VERSION, logger: logging.Logger | None = None):
        self._app_id = app_id
        self._app_version = app_version
        self._logger = logger or logging.getLogger(LOGGER_NAME)

    def log(
        self,
        *,
        event_name: str,
        event_category: str,
        event_action: str,
        operation_id: str | None = None,
        result_ok: bool | None = None,
        result_error_kind: str | None = None,
        duration_ms: float | None = None,
        counters: dict | None = None,
        data: dict | None = None,
        level: int = logging.INFO,
    ) -> None:
        """Пишет событие. Никогда не мешает вычислениям."""
        try:
            if not self._logger.isEnabledFor(level):
                return
            record = {
                "app_id": self._app_id,
                "app_version": self._app_version,
                "event_name": event_name,
                "event_category": event_category,
                "event_action": event_action,
            }
            if operation_id is not None:
                record["operation_id"] = operation_id
            if result_ok is not None:
                record["result_ok"] = result_ok
            if result_error_kind:
                record["result_error_kind"] = result_error_kind
            if duration_ms is not None:
                record["duration_ms"] = round(duration_ms, 3)
            if counters:
                record["counters"] = counters
            if data:
                record["data"] = data
            self._logger.log(level, json.dumps(record, ensure_ascii=False, sort_keys=True, default=str))
        except Exception:
            return

    @contextmanager
    def operation(self, event_name: str, event_category: str, **data):
        """Старт/финиш операции; в блок отдаётся словарь счётчиков."""
        operation_id = uuid.uuid4().hex
        counters: dict = {}
        t0 = time.monotonic()
        self.log(
            event_name=event_name, event_category=event_category, event_action="start",
            operation_id=operation_id, data=data or None, level=logging.DEBUG,
        )
        try:
            yield counters
        except Exception as e:
            self.log(
                event_name=event_name, event_category=event_category, event_action="finish",
                operation_id=operation_id, result_ok=False, result_error_kind=type(e).__name__,
                duration_ms=(time.monotonic() - t0) * 1000, counters=counters, level=logging.WARNING,
            )
            raise
        self.log(
            event_name=event_name, event_category=event_category, event_action="finish",
            operation_id=operation_id, result_ok=True,
            duration_ms=(time.monotonic() - t0) * 1000, counters=counters,
        )


events = EventLog()

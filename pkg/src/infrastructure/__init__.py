from .csv_source import CsvCountSource
from .event_log import EventLog, events

__all__ = ["CsvCountSource", "EventLog", "events"]

from dataclasses import dataclass
from functools import lru_cache

from src.services.members_catalog import MembersCatalog, get_members_catalog
from src.services.reference import PrintedReference, get_printed_reference
from src.services.settings import Settings, get_settings


@dataclass
class AppState:
    settings: Settings | None = None
    members: MembersCatalog | None = None
    reference: PrintedReference | None = None


@lru_cache
def get_app_state() -> AppState:
    """Один экземпляр AppState на процесс uvicorn."""
    return AppState(
        settings=get_settings(),
        members=get_members_catalog(),
        reference=get_printed_reference(),
    )


def get_state() -> AppState:
    return get_app_state()

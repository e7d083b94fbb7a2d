from .members_catalog import MembersCatalog
from .reference import PrintedReference
from .settings import Settings

__all__ = [
    "MembersCatalog",
    "PrintedReference",
    "Settings",
]

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from src.core.errors import UnknownMemberError
from src.core.models.estimator import MemberId
from src.infrastructure.config_loader import load_validated


class MembersCatalog:
    """Единственный источник параметров членов семейства t_m.
    Загружает config/members.json (члены семейства t_m).
    """

    FREE = "free"
    RHO = "rho"
    XBAR = "xbar"

    def __init__(self, directory: Path | None = None):
        data = load_validated("members.json", "members.schema.json", directory)
        self._members = {m["id"]: m for m in data["members"]}

    def ids(self) -> list[str]:
        return list(self._members.keys())

    def get_meta(self, member_id: str | MemberId) -> dict:
        key = member_id.value if isinstance(member_id, MemberId) else str(member_id).lower()
        meta = self._members.get(key)
        if meta is None:
            raise UnknownMemberError(f"Неизвестный член семейства: {member_id}")
        return meta

    def group_of(self, member_id: str | MemberId) -> str:
        return self.get_meta(member_id)["group"]


@lru_cache
def get_members_catalog() -> MembersCatalog:
    return MembersCatalog()

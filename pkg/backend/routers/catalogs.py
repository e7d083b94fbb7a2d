from fastapi import APIRouter, Depends, Query

from backend.dependencies import AppState, get_state
from backend.responses import json_response
from src.core.models.population import GammaTriple, moments_from_gammas
from src.services.estimators import member_table

router = APIRouter(tags=["Catalogs"])

@router.get("/members")
def get_members(
    gamma1: float | None = Query(default=None),
    gamma2: float | None = Query(default=None),
    gamma3: float | None = Query(default=None),
    state: AppState = Depends(get_state),
):
    """Члены t_m с подставленными ρ и X̄; без γ берётся тройка из опубликованного примера."""
    printed = state.reference.gammas
    g = GammaTriple(
        gamma1=printed.gamma1 if gamma1 is None else gamma1,
        gamma2=printed.gamma2 if gamma2 is None else gamma2,
        gamma3=printed.gamma3 if gamma3 is None else gamma3,
    )
    return json_response(member_table(moments_from_gammas(g), state.members))

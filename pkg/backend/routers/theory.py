from fastapi import APIRouter, Depends

from backend.dependencies import AppState, get_state
from backend.responses import json_response
from backend.schemas import TheoryRequest
from src.services import theory

router = APIRouter(prefix="/theory", tags=["Theory"])

@router.post("/pre-table")
def post_pre_table(body: TheoryRequest, state: AppState = Depends(get_state)):
    report = theory.pre_table(body.gammas, body.n, body.convention, state.members, state.reference)
    return json_response(report)

@router.post("/efficiency")
def post_efficiency(body: TheoryRequest):
    return json_response(theory.efficiency_report(body.gammas, body.n, body.convention))

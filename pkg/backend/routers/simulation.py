from fastapi import APIRouter, Depends

from backend.dependencies import AppState, get_state
from backend.responses import json_response
from backend.schemas import SimulateRequest
from src.core.models.population import moments_from_gammas
from src.core.models.reports import McConfig
from src.services import montecarlo, theory
from src.services.estimators import spec_from_name

router = APIRouter(tags=["Simulation"])

@router.post("/simulate")
def post_simulate(body: SimulateRequest, state: AppState = Depends(get_state)):
    cfg = McConfig(
        gammas=body.gammas,
        n=body.n,
        replicates=body.replicates,
        master_seed=body.seed,
        convention=body.convention,
        design=body.design,
        population_size=body.population_size,
        workers=state.settings.workers,
    )
    spec = spec_from_name(body.estimator, body.params, moments_from_gammas(cfg.gammas))
    spec = theory.resolve_free_parameters(spec, cfg.gammas, cfg.n, cfg.convention)
    report = montecarlo.run_mc(cfg, spec, state.settings.replicate_block, state.settings.failure_threshold)
    montecarlo.check_quality(report, state.settings.failure_threshold)
    verdicts = montecarlo.arbitrate_bias(report, montecarlo.bias_predictions(spec, cfg.gammas, cfg.n))
    return json_response({"spec": spec, "report": report, "bias_verdicts": verdicts})

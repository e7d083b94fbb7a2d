from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from backend.dependencies import get_app_state
from backend.routers import catalogs, fit, health, simulation, theory
from src import APP_VERSION
from src.core.errors import AllReplicatesFailedError, EstimationError, SimulationQualityError


@asynccontextmanager
async def lifespan(app: FastAPI):
    state = get_app_state()
    app.state.app_state = state
    yield


app = FastAPI(title="Poisson Mean Estimators API", lifespan=lifespan, version=APP_VERSION)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(SimulationQualityError)
@app.exception_handler(AllReplicatesFailedError)
async def simulation_quality_handler(request: Request, exc: EstimationError):
    return JSONResponse(status_code=409, content={"detail": str(exc)})


@app.exception_handler(EstimationError)
@app.exception_handler(ValidationError)
async def estimation_error_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


app.include_router(health.router, prefix="/api")
app.include_router(catalogs.router, prefix="/api")
app.include_router(theory.router, prefix="/api")
app.include_router(fit.router, prefix="/api")
app.include_router(simulation.router, prefix="/api")

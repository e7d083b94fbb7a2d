from fastapi import APIRouter, HTTPException

from backend.responses import json_response
from backend.schemas import FitRequest
from src.core.errors import InsufficientDataError
from src.core.models.sample import Sample
from src.infrastructure.csv_source import parse_pairs
from src.services import fit

router = APIRouter(tags=["Fit"])

@router.post("/fit")
def post_fit(body: FitRequest):
    if (body.pairs is None) == (body.csv is None):
        raise HTTPException(status_code=400, detail="Нужно ровно одно из полей pairs или csv")
    if body.csv is not None:
        sample = parse_pairs(body.csv)
    else:
        if not body.pairs:
            raise HTTPException(status_code=400, detail="Список pairs пуст")
        try:
            sample = Sample.from_pairs(body.pairs)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e))
    result = fit.fit_gammas(sample, clamp=body.clamp)
    gof = {}
    for marginal, values in (("x", sample.x), ("y", sample.y)):
        try:
            gof[marginal] = fit.poisson_gof(values)
        except InsufficientDataError:
            gof[marginal] = None
    return json_response({"fit": result, "gof": gof})

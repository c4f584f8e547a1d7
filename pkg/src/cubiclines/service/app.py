"""FastAPI front end for the lattice verification checks.

Every endpoint is a pure function of its request body, so responses are
reproducible byte for byte; the heavy group tables are process-level
caches warmed on first use.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..lines27 import (
    build_line_table,
    corrupted_line_table,
    line_table_json,
    verify_sixth_line_equivalence,
)
from ..sweep import SweepConfig, fibrations_doc, thm23_sweep, verify_sweep
from ..weyl import SpecError, parse_generator
from . import schemas

app = FastAPI(
    title="cubiclines",
    description="Exact verification of norm spans in the divisor lattice "
    "of the 27 lines on a cubic surface.",
    version=__version__,
)


@app.get("/", response_model=schemas.ServiceInfo)
def info():
    return {
        "name": "cubiclines",
        "version": __version__,
        "endpoints": ["/lines", "/lemma21", "/fibrations", "/thm23", "/verify"],
    }


@app.get("/lines", response_model=schemas.LinesResponse)
def lines():
    records = line_table_json()
    return {
        "command": "lines",
        "reports": records,
        "summary": {"lines": len(records)},
    }


@app.post("/lemma21", response_model=schemas.Lemma21Response)
def lemma21(request: schemas.Lemma21Request):
    table = corrupted_line_table() if request.self_test else build_line_table()
    report = verify_sixth_line_equivalence(table)
    return {
        "command": "lemma21",
        "self_test": request.self_test,
        "report": report.to_dict(),
        "summary": {"failures": report.failures},
    }


@app.get("/fibrations", response_model=schemas.FibrationsResponse)
def fibrations():
    return fibrations_doc()


def _parse_gens(texts):
    if texts is None:
        return None
    try:
        return [parse_generator(t) for t in texts]
    except SpecError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _config(request: schemas.SweepRequest) -> SweepConfig:
    return SweepConfig(
        seed=request.seed,
        random_count=request.random_count,
        include_cyclic=request.include_cyclic,
        include_stabilizers=request.include_stabilizers,
        jobs=request.jobs,
        max_gens=request.max_gens,
    )


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify(request: schemas.SweepRequest):
    gens = _parse_gens(request.gens)
    try:
        return verify_sweep(_config(request), gens=gens)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/thm23", response_model=schemas.Thm23Response)
def thm23(request: schemas.SweepRequest):
    gens = _parse_gens(request.gens)
    try:
        return thm23_sweep(_config(request), gens=gens)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc

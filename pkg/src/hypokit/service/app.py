"""FastAPI front end over the analysis library.

Every endpoint is stateless and pure; errors surface as structured JSON
bodies with the library error code, HTTP 400 for mathematical
precondition failures, 422 for malformed payloads, and 500 for internal
consistency errors (the CLI maps these to its exit codes).
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__, corpus, reporting
from ..asymptotics import cayley_series_minimum
from ..cayley import verify_index_preservation
from ..coercivity import certify_semidissipative
from ..contractivity import certify_semicontractive
from ..errors import HypokitError
from ..hilbertform import hilbert_inverse_entry, hilbert_min
from ..linalg import Tolerances
from ..transform import maximally_coercive, maximally_contractive
from .models import (
    AnalyzeRequest,
    CayleyRequest,
    DecayRequest,
    HilbertRequest,
    SweepRequest,
    TransformRequest,
    VerifyRequest,
)

app = FastAPI(
    title="hypokit",
    version=__version__,
    description="Stability structure of linear continuous- and discrete-time systems",
)

_STATUS = {"parse": 422, "precondition": 400, "consistency": 500}


@app.exception_handler(HypokitError)
async def _hypokit_error(request: Request, exc: HypokitError) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS.get(exc.category, 400),
        content={
            "schema": reporting.SCHEMA,
            "error": {"code": exc.code, "message": str(exc), "category": exc.category},
        },
    )


def _tol(req) -> Tolerances | None:
    return req.tolerances.resolve() if req.tolerances is not None else None


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "schema": reporting.SCHEMA, "version": __version__}


@app.post("/analyze")
def analyze(req: AnalyzeRequest) -> dict:
    a = req.matrix.to_array()
    tol = _tol(req)
    kwargs = {} if tol is None else {"tol": tol}
    if req.discrete:
        sys = certify_semicontractive(a, **kwargs)
        return reporting.analyze_discrete(sys, req.m_max)
    sys = certify_semidissipative(a, **kwargs)
    return reporting.analyze_continuous(sys, req.m_max)


@app.post("/decay")
def decay(req: DecayRequest) -> dict:
    a = req.matrix.to_array()
    tol = _tol(req)
    sys = certify_semidissipative(a, **({} if tol is None else {"tol": tol}))
    return reporting.decay_report(sys, req.t_grid)


@app.post("/sweep")
def sweep(req: SweepRequest) -> PlainTextResponse:
    a = req.matrix.to_array()
    tol = _tol(req)
    sys = certify_semidissipative(a, **({} if tol is None else {"tol": tol}))
    csv = reporting.sweep_csv(sys, req.tau, req.k_max, req.t_points)
    return PlainTextResponse(csv, media_type="text/csv")


@app.post("/cayley")
def cayley(req: CayleyRequest) -> dict:
    a = req.matrix.to_array()
    tol = _tol(req)
    sys = certify_semidissipative(a, **({} if tol is None else {"tol": tol}))
    reports = [verify_index_preservation(sys, tau) for tau in req.taus]
    return {
        "schema": reporting.SCHEMA,
        "matrix_id": req.matrix_id,
        "all_pass": all(r.passed for r in reports),
        "rows": [asdict(r) for r in reports],
        "csv": reporting.preservation_csv(reports, req.matrix_id),
    }


@app.post("/transform")
def transform(req: TransformRequest) -> dict:
    # raw matrices are fine here: the transforms need stability only
    a = req.matrix.to_array()
    tol = _tol(req)
    if req.discrete:
        result = maximally_contractive(a, req.epsilon, tol=tol)
    else:
        result = maximally_coercive(a, req.epsilon, tol=tol)
    return reporting.transform_report(result)


@app.post("/hilbert")
def hilbert(req: HilbertRequest) -> dict:
    minimum = hilbert_min(req.m)
    series = cayley_series_minimum(req.m)
    return {
        "schema": reporting.SCHEMA,
        "m": req.m,
        "value": minimum.value,
        "value_exact": str(minimum.value_exact),
        "lambda_star": list(minimum.lambda_star),
        "inverse_entry": hilbert_inverse_entry(req.m),
        "series_minimum": series.value,
        "series_minimum_exact": str(series.value_exact),
        "series_minimizer": list(series.minimizer),
    }


@app.post("/verify")
def verify(req: VerifyRequest) -> dict:
    summary = corpus.run_verification(req.seed, req.count, req.only)
    return {
        "schema": reporting.SCHEMA,
        "seed": summary.seed,
        "count": summary.count,
        "passed": summary.passed,
        "properties": [
            {
                "name": p.name,
                "checked": p.checked,
                "failures": p.failures,
                "passed": p.passed,
                "details": p.details[:20],
            }
            for p in summary.properties
        ],
    }

"""HTTP front end for the experiment driver."""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, harness
from ..config import RunConfig
from ..errors import InputError, NumericalError
from .schemas import (
    ErrorResponse,
    HamiltonianCheckRequest,
    HamiltonianCheckResponse,
    HealthResponse,
    ScanResponse,
    SpectrumRequest,
    SpectrumResponse,
    ZerosRequest,
    ZerosResponse,
)

ERRORS = {400: {"model": ErrorResponse}, 500: {"model": ErrorResponse}}


def create_app() -> FastAPI:
    app = FastAPI(title="skewlab", version=__version__)

    @app.exception_handler(InputError)
    async def _input_error(request: Request, exc: InputError):
        return JSONResponse(status_code=400, content={"detail": str(exc), "kind": "input"})

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError):
        return JSONResponse(status_code=500, content={"detail": str(exc), "kind": "numerical"})

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/spectrum", response_model=SpectrumResponse, responses=ERRORS)
    def spectrum(req: SpectrumRequest):
        pairs = harness.run_spectrum(req.N, req.p, req.k)
        return SpectrumResponse(
            N=req.N, p=req.p, k=req.k, eps=pairs.eps.tolist(), zero_modes=pairs.zero_modes
        )

    @app.post("/hamiltonian-check", response_model=HamiltonianCheckResponse, responses=ERRORS)
    def hamiltonian_check(req: HamiltonianCheckRequest):
        report = harness.run_hamiltonian_check(req.t, req.N, req.oracle, req.allow_large)
        return HamiltonianCheckResponse(**report, text=harness.format_hamiltonian_report(report))

    @app.post("/zeros", response_model=ZerosResponse, responses=ERRORS)
    def zeros(req: ZerosRequest):
        table = harness.run_zeros(req.m)
        return ZerosResponse(
            ordinates=table.ordinates.tolist(),
            bracket_widths=table.bracket_widths.tolist(),
            method=table.method,
            tol=table.tol,
        )

    @app.post("/scan", response_model=ScanResponse, responses=ERRORS)
    def scan(cfg: RunConfig):
        outcome = harness.run_scan(cfg)
        return ScanResponse(
            **outcome.summary(),
            files=outcome.files,
            cache_hits=outcome.cache_hits,
            cache_misses=outcome.cache_misses,
        )

    return app


app = create_app()

import asyncio
import logging
from contextlib import asynccontextmanager
from typing import AsyncIterator, Callable, TypeVar

from fastapi import Depends, FastAPI, HTTPException
from fastapi.concurrency import run_in_threadpool
from fastapi.middleware.cors import CORSMiddleware

from .config import settings
from .deps import rate_limiter, verify_api_key
from .errors import DomainError, HypothesisError, MultspecError, ParseError, SpecError, SymbolConstructionError
from .multipliers import fredholm_analysis, is_invertible, is_multiplier, peak_refutation_scan
from .render import jsonable, spectrum_payload
from .schemas import (
    Envelope,
    EssentialSpectrumRequest,
    FredholmRequest,
    HealthResponse,
    PeakScanRequest,
    PeakScanResult,
    PeakScanRow,
    SpaceRequest,
    SymbolRequest,
)
from .spaces import norm_report
from .spectra import essential_spectrum, spectrum
from .symbols import Symbol, parse_constant, parse_symbol, to_series

logger = logging.getLogger(__name__)

T = TypeVar("T")


class _ComputeLimiter:
    """Limit how many computations run in parallel."""

    def __init__(self, max_parallel: int) -> None:
        self.configure(max_parallel)

    def configure(self, max_parallel: int) -> None:
        value = max(1, int(max_parallel or 1))
        self._max_parallel = value
        self._semaphore = asyncio.Semaphore(value)

    @property
    def max_parallel(self) -> int:
        return self._max_parallel

    @asynccontextmanager
    async def slot(self) -> AsyncIterator[None]:
        await self._semaphore.acquire()
        try:
            yield
        finally:
            self._semaphore.release()


_limiter = _ComputeLimiter(settings.max_parallel_requests)

app = FastAPI(title="multspec")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)

_guards = [Depends(rate_limiter), Depends(verify_api_key)]

_INPUT_CODES = (
    (ParseError, "parse_error"),
    (SymbolConstructionError, "invalid_symbol"),
    (SpecError, "invalid_space"),
    (DomainError, "domain_error"),
)


def _http_error(e: MultspecError) -> HTTPException:
    if isinstance(e, HypothesisError):
        return HTTPException(
            status_code=422,
            detail={"message": f"{e} [{e.theorem}]", "type": "hypothesis_error", "code": "outside_theorem_hypotheses"},
        )
    if isinstance(e, (ParseError, SymbolConstructionError, SpecError, DomainError)):
        code = next(c for kind, c in _INPUT_CODES if isinstance(e, kind))
        return HTTPException(
            status_code=400,
            detail={"message": str(e), "type": "invalid_request_error", "code": code},
        )
    return HTTPException(
        status_code=500,
        detail={"message": str(e), "type": "server_error", "code": None},
    )


async def _compute(fn: Callable[[], T]) -> T:
    async with _limiter.slot():
        try:
            return await run_in_threadpool(fn)
        except MultspecError as e:
            logger.info("request failed: %s", e)
            raise _http_error(e)


def _symbol(req: SymbolRequest) -> Symbol:
    return parse_symbol(req.symbol, req.space.n if req.space is not None else None)


@app.get("/v1/health")
async def health() -> HealthResponse:
    return HealthResponse(max_parallel=_limiter.max_parallel)


@app.post("/v1/norm", dependencies=_guards)
async def norm_endpoint(req: SpaceRequest) -> Envelope:
    def work():
        u = _symbol(req)
        f = to_series(u) if u.dimension == 1 else u.to_multipoly()
        return {"symbol": u.render(), "report": norm_report(req.space, f)}

    return Envelope(kind="norm", result=jsonable(await _compute(work)))


@app.post("/v1/spectrum", dependencies=_guards)
async def spectrum_endpoint(req: SymbolRequest) -> Envelope:
    est = await _compute(lambda: spectrum(_symbol(req)))
    return Envelope(kind="spectrum", result=spectrum_payload(est))


@app.post("/v1/ess-spectrum", dependencies=_guards)
async def essential_spectrum_endpoint(req: EssentialSpectrumRequest) -> Envelope:
    est = await _compute(lambda: essential_spectrum(_symbol(req), req.space, annulus=req.annulus))
    return Envelope(kind="essential", result=spectrum_payload(est))


@app.post("/v1/fredholm", dependencies=_guards)
async def fredholm_endpoint(req: FredholmRequest) -> Envelope:
    report = await _compute(lambda: fredholm_analysis(_symbol(req), parse_constant(req.lam), req.space))
    return Envelope(kind="fredholm", result=jsonable(report))


@app.post("/v1/multiplier", dependencies=_guards)
async def multiplier_endpoint(req: SpaceRequest) -> Envelope:
    def work():
        u = _symbol(req)
        return {"report": is_multiplier(req.space, u), "invertibility": is_invertible(u)}

    return Envelope(kind="multiplier", result=jsonable(await _compute(work)))


@app.post("/v1/peak-scan", dependencies=_guards)
async def peak_scan_endpoint(req: PeakScanRequest) -> Envelope:
    grid = [2**j for j in range(3, req.kmax.bit_length())]

    def work():
        return peak_refutation_scan(_symbol(req), parse_constant(req.xi), req.space, grid)

    rows = await _compute(work)
    result = PeakScanResult(rows=[PeakScanRow(k=k, norm=value) for k, value in rows])
    return Envelope(kind="peak-scan", result=result.model_dump())

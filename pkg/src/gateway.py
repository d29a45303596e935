import asyncio
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager

import uvicorn
from cachetools import TTLCache
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from core.config import (
    GATEWAY_MAX_CUTOFF,
    GATEWAY_QUEUE_DEPTH,
    GATEWAY_SUITES,
    MAX_REQUEST_SIZE,
    PORT,
    QSPHERE_OPERATOR_CUTOFF,
    SUITE_NAMES,
    load_run_config,
)
from core.error_handler import ErrorCategory, categorize_error
from core.logger import setup_logger
from core.validators import ValidationError
from qsphere import cocycle, spectral
from qsphere.errors import QSphereError
from qsphere.expr import CONTEXTS, parse_expression
from qsphere.haar import haar
from qsphere.qscalar import RationalQ, normalize
from qsphere.reports import render_value, report_digest
from qsphere.suites import run_named_suite

logger = setup_logger("GATEWAY")

api_rate = TTLCache(maxsize=5000, ttl=5)

REQUEST_TIMEOUT_SECONDS = 60
GATEWAY_SAMPLES = 20

SECURITY_HEADERS = {
    "X-Content-Type-Options": "nosniff",
    "X-Frame-Options": "DENY",
    "Referrer-Policy": "strict-origin-when-cross-origin",
    "Content-Security-Policy": "default-src 'self'",
}


class NormalizeRequest(BaseModel):
    expr: str
    context: str = "algebra"


class HaarRequest(BaseModel):
    expr: str


class TauRequest(BaseModel):
    x0: str
    x1: str
    x2: str


class VerifyRequest(BaseModel):
    suite: str
    seed: int | None = None


async def rate_limit(request: Request) -> bool:
    forwarded = request.headers.get("x-forwarded-for")
    client_ip = forwarded.split(",")[0].strip() if forwarded else (request.client.host if request.client else "unknown")
    current = api_rate.get(client_ip, 0)
    api_rate[client_ip] = current + 1
    return current < 50


async def check_request_size(request: Request) -> bool:
    content_length = request.headers.get("content-length")
    if content_length:
        try:
            if int(content_length) > MAX_REQUEST_SIZE:
                logger.warning(
                    f"Request too large: {content_length}B from {request.client.host if request.client else 'unknown'}"
                )
                return False
        except (ValueError, TypeError):
            pass
    return True


def _error(exc: Exception) -> JSONResponse:
    code = getattr(exc, "error_code", categorize_error(exc).value)
    return JSONResponse({"error": str(exc), "code": code}, status_code=400)


class GatewayBusy(Exception):
    error_code = "BUSY"


class ComputeLane:
    """
    Single worker thread for exact and spectral work, with bounded admission.

    mpmath precision is process-global, so jobs run one at a time. A job holds its slot until
    the worker finishes it, even when the request that submitted it has timed out; once
    ``depth`` jobs hold slots, new requests are refused with GatewayBusy.
    """

    def __init__(self, depth: int = GATEWAY_QUEUE_DEPTH):
        self.depth = depth
        self._slots = threading.BoundedSemaphore(depth)
        self._executor: ThreadPoolExecutor | None = None
        self.admitted = 0
        self.rejected = 0

    def _pool(self) -> ThreadPoolExecutor:
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=1, thread_name_prefix="qsphere-compute")
        return self._executor

    async def run(self, func, *args):
        if not self._slots.acquire(blocking=False):
            self.rejected += 1
            logger.warning(f"Compute lane full ({self.depth} jobs); request refused")
            raise GatewayBusy("server busy, retry shortly")
        try:
            future = self._pool().submit(func, *args)
        except BaseException:
            self._slots.release()
            raise
        future.add_done_callback(lambda _: self._slots.release())
        self.admitted += 1
        return await asyncio.wrap_future(future)

    def stats(self) -> dict:
        return {"depth": self.depth, "admitted": self.admitted, "rejected": self.rejected}

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=False, cancel_futures=True)
            self._executor = None


compute_lane = ComputeLane()


async def _compute(func, *args):
    """Exact and spectral work is CPU bound; it runs on the compute lane, off the event loop."""
    return await compute_lane.run(func, *args)


def _exact_payload(value) -> dict:
    payload = {"value": render_value(value)}
    if isinstance(value, RationalQ):
        payload["at_q0_half"] = render_value(value.evaluate("1/2", 64))
    return payload


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info(f"🚀 QSPHERE GATEWAY STARTING (suites: {', '.join(GATEWAY_SUITES)})")
    yield
    compute_lane.shutdown()
    logger.info("👋 QSPHERE GATEWAY STOPPED")


app = FastAPI(
    title="qsphere",
    docs_url=None,
    redoc_url=None,
    openapi_url=None,
    lifespan=lifespan,
)


@app.middleware("http")
async def global_protection(request: Request, call_next):
    if request.url.path in ("/health", "/"):
        response = await call_next(request)
        for header, value in SECURITY_HEADERS.items():
            response.headers[header] = value
        return response

    if not await check_request_size(request):
        return JSONResponse({"error": f"Payload too large. Max {MAX_REQUEST_SIZE}B."}, status_code=413)

    if not await rate_limit(request):
        return JSONResponse({"error": "Rate Limit Exceeded."}, status_code=429)

    try:
        response = await asyncio.wait_for(call_next(request), timeout=REQUEST_TIMEOUT_SECONDS)
    except TimeoutError:
        logger.warning(f"Request timeout on {request.url.path}")
        return JSONResponse({"error": "Request timed out"}, status_code=504)

    for header, value in SECURITY_HEADERS.items():
        response.headers[header] = value

    return response


@app.exception_handler(QSphereError)
async def qsphere_exception_handler(request: Request, exc: QSphereError):
    logger.warning(f"{request.url.path}: [{exc.error_code}] {exc.message}")
    return _error(exc)


@app.exception_handler(GatewayBusy)
async def busy_exception_handler(request: Request, exc: GatewayBusy):
    return JSONResponse(
        {"error": str(exc), "code": exc.error_code}, status_code=503, headers={"Retry-After": "5"}
    )


@app.exception_handler(ValidationError)
async def validation_exception_handler(request: Request, exc: ValidationError):
    logger.warning(f"{request.url.path}: [{exc.error_code}] {exc}")
    return _error(exc)


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    if categorize_error(exc) != ErrorCategory.INTERNAL_ERROR:
        return _error(exc)
    logger.error(f"Unhandled exception on {request.url.path}: {exc}")
    return JSONResponse({"error": "An internal error occurred", "code": "INTERNAL"}, status_code=500)


@app.get("/health")
async def health():
    return JSONResponse({"status": "ok", "suites": list(GATEWAY_SUITES), "compute": compute_lane.stats()})


@app.get("/")
async def root():
    return JSONResponse({"status": "ok", "system": "qsphere"})


@app.post("/normalize")
async def normalize_endpoint(body: NormalizeRequest):
    if body.context not in CONTEXTS:
        raise ValidationError(f"context must be one of {', '.join(CONTEXTS)}", "INVALID_CONTEXT")

    def run():
        value = parse_expression(body.expr, body.context)
        return normalize(value) if isinstance(value, RationalQ) else value

    value = await _compute(run)
    return {"expr": body.expr, "context": body.context, **_exact_payload(value)}


@app.post("/haar")
async def haar_endpoint(body: HaarRequest):
    value = await _compute(lambda: haar(parse_expression(body.expr, "algebra")))
    return {"expr": body.expr, **_exact_payload(value)}


@app.post("/tau")
async def tau_endpoint(body: TauRequest):
    def run():
        return cocycle.tau(*(parse_expression(text, "podles") for text in (body.x0, body.x1, body.x2)))

    value = await _compute(run)
    return {"x0": body.x0, "x1": body.x1, "x2": body.x2, **_exact_payload(value)}


@app.get("/spectrum")
async def spectrum_endpoint(q0: str = "1/2", L: int = min(QSPHERE_OPERATOR_CUTOFF, GATEWAY_MAX_CUTOFF)):
    if L > GATEWAY_MAX_CUTOFF:
        raise ValidationError(f"Cutoff L={L} exceeds the gateway limit {GATEWAY_MAX_CUTOFF}", "GATEWAY_CUTOFF")
    config = load_run_config(overrides={"q0": q0, "cutoff": str(L)})

    def run():
        space = spectral.TruncatedSpace(config.q0, config.cutoff, config.precision_bits)
        return spectral.spectrum_table(space), spectral.dirac_spectrum_check(space, config.tolerance("eigen"))

    rows, check = await _compute(run)
    return {
        "q0": str(config.q0),
        "L": config.cutoff,
        "levels": [{"n": n, "plus": p, "minus": m, "mult": k} for n, p, m, k in rows],
        "check": check.to_dict(),
    }


@app.post("/verify")
async def verify_endpoint(body: VerifyRequest):
    if body.suite not in SUITE_NAMES:
        raise ValidationError(f"Unknown suite {body.suite!r}", "UNKNOWN_SUITE")
    if body.suite not in GATEWAY_SUITES:
        raise ValidationError(f"Suite {body.suite!r} is only available from the CLI", "SUITE_NOT_SERVED")
    overrides = {"suites": body.suite, "samples": str(GATEWAY_SAMPLES)}
    if body.seed is not None:
        overrides["seed"] = str(body.seed)
    config = load_run_config(overrides=overrides)
    results = await _compute(run_named_suite, body.suite, config)
    lines = [r.to_json_line() for r in results]
    return {
        "suite": body.suite,
        "seed": config.seed,
        "passed": all(r.passed for r in results),
        "digest": report_digest(lines),
        "results": [r.to_dict() for r in results],
    }


if __name__ == "__main__":
    uvicorn.run(
        app,
        host="0.0.0.0",
        port=PORT,
        log_level="info",
        access_log=True,
        server_header=False,
    )

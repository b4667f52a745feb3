"""HTTP surface: POST /embed, POST /entail, GET /health.

JSON over HTTP/1.1, UTF-8.  Malformed bodies answer 400, oversized batches
413, and an engine whose model is unavailable 503.  Requests are stateless
and safe to issue concurrently; the engine is constructed once per app.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .engines import FixtureStore, ModelNotLoadedError, RealEngine, StubEngine

DEFAULT_MAX_BATCH = 256


class EmbedRequest(BaseModel):
    texts: list[str]


class EmbedResponse(BaseModel):
    vectors: list[list[float]]
    dim: int


class EntailRequest(BaseModel):
    premise: str
    hypotheses: list[str]
    normalize: bool = True


class EntailResponse(BaseModel):
    probs: list[float]
    truncated: bool = False


def engine_from_env() -> StubEngine | RealEngine:
    mode = os.environ.get("SIDECAR_MODE", "stub")
    fixtures_path = os.environ.get("SIDECAR_FIXTURES")
    if mode == "real":
        return RealEngine()
    return StubEngine(FixtureStore(fixtures_path))


def create_app(engine=None, max_batch: int = DEFAULT_MAX_BATCH) -> FastAPI:
    app = FastAPI(title="inference-sidecar")
    app.state.engine = engine if engine is not None else engine_from_env()
    app.state.max_batch = max_batch

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:1])})

    @app.exception_handler(ModelNotLoadedError)
    async def not_loaded(request: Request, exc: ModelNotLoadedError):
        return JSONResponse(status_code=503, content={"error": str(exc)})

    @app.post("/embed", response_model=EmbedResponse)
    def embed(body: EmbedRequest):
        if not body.texts:
            return JSONResponse(status_code=400, content={"error": "texts must be non-empty"})
        if len(body.texts) > app.state.max_batch:
            return JSONResponse(
                status_code=413,
                content={"error": f"batch of {len(body.texts)} exceeds limit {app.state.max_batch}"},
            )
        # Returned as-is so recorded fixtures are served byte-verbatim.
        return JSONResponse(content=app.state.engine.embed(body.texts))

    @app.post("/entail", response_model=EntailResponse)
    def entail(body: EntailRequest):
        if not body.premise.strip():
            return JSONResponse(status_code=400, content={"error": "premise must be non-empty"})
        if not body.hypotheses:
            return JSONResponse(status_code=400, content={"error": "hypotheses must be non-empty"})
        if len(body.hypotheses) > app.state.max_batch:
            return JSONResponse(
                status_code=413,
                content={
                    "error": f"{len(body.hypotheses)} hypotheses exceed limit {app.state.max_batch}"
                },
            )
        return JSONResponse(
            content=app.state.engine.entail(body.premise, body.hypotheses, body.normalize)
        )

    @app.get("/health")
    def health():
        engine = app.state.engine
        try:
            engine.ensure_ready()
            status = "ok"
        except ModelNotLoadedError as exc:
            return JSONResponse(
                status_code=200,
                content={
                    "status": "degraded",
                    "mode": engine.mode,
                    "models": engine.model_ids,
                    "context_limit": engine.context_limit,
                    "error": str(exc),
                },
            )
        return {
            "status": status,
            "mode": engine.mode,
            "models": engine.model_ids,
            "context_limit": engine.context_limit,
        }

    return app

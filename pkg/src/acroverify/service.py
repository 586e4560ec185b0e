"""Local HTTP/JSON API for the translator console and programmatic clients.

Endpoints (all responses are pure functions of index + backend + request):
  POST /api/verify     {lf, sf, k?}        -> {status, sources, threshold}
  POST /api/translate  {fr_lf, fr_sf, k?}  -> pipeline output JSON
  GET  /api/sf?lf=...                      -> {sfs: [{sf, source_count, sources}]}
  GET  /healthz                            -> {status, index_docs}

Error bodies always look like {"code", "message", "http_status"}.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .corpus import TermPair
from .errors import EmptyLongForm, MtError
from .index import AcronymIndex
from .pipeline import PipelineConfig, PipelineOutput, translate_term

_STATUS_CODES = {400: "bad_request", 404: "not_found", 502: "backend_unavailable"}


def _error(status: int, message: str, code: str | None = None) -> JSONResponse:
    body = {
        "code": code or _STATUS_CODES.get(status, "internal"),
        "message": message,
        "http_status": status,
    }
    return JSONResponse(body, status_code=status)


def _output_json(output: PipelineOutput) -> dict:
    return {
        "en_lf": output.en_lf,
        "chosen_sf": output.chosen_sf,
        "path": output.path.value,
        "mt_sf": output.mt_sf,
        "verification": {
            "status": output.verification.status.value,
            "sources": list(output.verification.sources),
            "threshold": output.verification.threshold,
        },
        "n_best": [
            {
                "sf": hyp.sf,
                "score": hyp.score,
                "origin": hyp.origin.value,
                "status": res.status.value,
                "sources": list(res.sources),
            }
            for hyp, res in output.n_best
        ],
    }


async def _json_body(request: Request) -> dict | JSONResponse:
    try:
        body = await request.json()
    except Exception:
        return _error(400, "request body must be JSON")
    if not isinstance(body, dict):
        return _error(400, "request body must be a JSON object")
    return body


def _field(body: dict, name: str) -> str | None:
    value = body.get(name)
    if isinstance(value, str) and value.strip():
        return value
    return None


def _threshold(body: dict, default: int) -> int | None:
    k = body.get("k", default)
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        return None
    return k


def create_app(
    index: AcronymIndex,
    backend=None,
    k: int = 2,
    max_candidates: int = 50,
    max_interior: int = 3,
    static_dir=None,
    cors_localhost: bool = False,
) -> FastAPI:
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)

    if cors_localhost:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(StarletteHTTPException)
    async def _http_exc(request: Request, exc: StarletteHTTPException):
        return _error(exc.status_code, str(exc.detail))

    @app.exception_handler(Exception)
    async def _any_exc(request: Request, exc: Exception):
        return _error(500, "internal error")

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "index_docs": index.doc_count}

    @app.post("/api/verify")
    async def api_verify(request: Request):
        body = await _json_body(request)
        if isinstance(body, JSONResponse):
            return body
        lf, sf = _field(body, "lf"), _field(body, "sf")
        if lf is None or sf is None:
            return _error(400, "fields 'lf' and 'sf' are required and must be non-empty")
        threshold = _threshold(body, k)
        if threshold is None:
            return _error(400, "'k' must be a positive integer")
        result = index.verify(lf, sf, threshold)
        return {
            "status": result.status.value,
            "sources": list(result.sources),
            "threshold": result.threshold,
        }

    @app.post("/api/translate")
    async def api_translate(request: Request):
        body = await _json_body(request)
        if isinstance(body, JSONResponse):
            return body
        fr_lf, fr_sf = _field(body, "fr_lf"), _field(body, "fr_sf")
        if fr_lf is None or fr_sf is None:
            return _error(400, "fields 'fr_lf' and 'fr_sf' are required and must be non-empty")
        threshold = _threshold(body, k)
        if threshold is None:
            return _error(400, "'k' must be a positive integer")
        if backend is None:
            return _error(502, "no MT backend configured")
        config = PipelineConfig(
            backend=backend, k=threshold,
            max_candidates=max_candidates, max_interior=max_interior,
        )
        try:
            output = translate_term(TermPair(fr_lf, fr_sf, "fr"), index, config)
        except MtError as exc:
            return _error(502, str(exc))
        except EmptyLongForm as exc:
            return _error(502, str(exc))
        except ValueError as exc:
            return _error(400, str(exc))
        return _output_json(output)

    @app.get("/api/sf")
    async def api_sf(request: Request):
        lf = request.query_params.get("lf", "")
        if not lf.strip():
            return _error(400, "query parameter 'lf' is required and must be non-empty")
        attested = index.lookup_sfs(lf)
        rows = [
            {"sf": sf, "source_count": len(docs), "sources": sorted(docs)}
            for sf, docs in attested.items()
        ]
        rows.sort(key=lambda r: (-r["source_count"], r["sf"]))
        return {"sfs": rows}

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app

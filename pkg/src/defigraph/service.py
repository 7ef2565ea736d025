"""HTTP facade: request validation, response caching, JSON endpoints.

GET /api/define and GET /api/graph run one shared pipeline; the first hit
for a (keyword, language) pair queries the endpoint, both endpoints are then
served from the same cache entry until it expires. The built web UI's static
assets are served at /.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from . import __version__
from .cache import TTLCache
from .definition_model import (
    DefinitionResult,
    EmptyKeyword,
    InvalidCharacters,
    MultiWordKeyword,
    ResourceNotFound,
    normalize_keyword,
)
from .pipeline import LookupConfig, run_lookup
from .sparql_client import EndpointConfig, EndpointError, MalformedResponse, Timeout

#: Exception-to-response mapping, checked in order. Every error the pipeline
#: can raise appears exactly once.
ERROR_MAP: tuple[tuple[type[Exception], int, str], ...] = (
    (EmptyKeyword, 400, "empty_keyword"),
    (MultiWordKeyword, 400, "multi_word_keyword"),
    (InvalidCharacters, 400, "invalid_characters"),
    (ResourceNotFound, 404, "resource_not_found"),
    (Timeout, 504, "upstream_timeout"),
    (MalformedResponse, 502, "malformed_response"),
    (EndpointError, 502, "endpoint_error"),
)

JSONLD_MEDIA_TYPE = "application/ld+json"


@dataclass(frozen=True)
class ServiceConfig:
    listen_port: int = 8000
    endpoint: EndpointConfig = field(default_factory=EndpointConfig)
    language: str = "en"
    max_sentences: int = 3
    max_per_kind: int = 25
    cache_ttl: float = 600.0
    cache_capacity: int = 1024
    allowed_origins: tuple[str, ...] = ("*",)
    static_dir: str | None = "frontend/dist"

    def __post_init__(self) -> None:
        if self.cache_capacity < 1:
            raise ValueError("cache_capacity must be at least 1")
        if self.cache_ttl < 0:
            raise ValueError("cache_ttl must be non-negative")

    @classmethod
    def from_env(cls, environ=os.environ) -> "ServiceConfig":
        endpoint = EndpointConfig(
            endpoint_url=environ.get("DEFIGRAPH_ENDPOINT_URL", EndpointConfig().endpoint_url)
        )
        return cls(
            listen_port=int(environ.get("DEFIGRAPH_PORT", cls.listen_port)),
            endpoint=endpoint,
            language=environ.get("DEFIGRAPH_LANGUAGE", cls.language),
            max_sentences=int(environ.get("DEFIGRAPH_MAX_SENTENCES", cls.max_sentences)),
            cache_ttl=float(environ.get("DEFIGRAPH_CACHE_TTL_SECS", cls.cache_ttl)),
            static_dir=environ.get("DEFIGRAPH_STATIC_DIR", cls.static_dir),
        )


@dataclass(frozen=True)
class CacheEntry:
    key: str
    definition: DefinitionResult
    tree_document: bytes
    inserted_at: float


def _define_body(definition: DefinitionResult) -> bytes:
    payload = {
        "term": definition.term.iri,
        "label": definition.term.label,
        "abstract": definition.abstract,
        "truncated": definition.full_abstract_available,
    }
    if definition.thumbnail is not None:
        payload["thumbnail"] = definition.thumbnail
    payload["language"] = definition.language
    return json.dumps(payload, ensure_ascii=False).encode("utf-8")


def _error_response(exc: Exception) -> Response:
    for exc_type, status, code in ERROR_MAP:
        if isinstance(exc, exc_type):
            body = json.dumps({"code": code, "message": str(exc)}, ensure_ascii=False)
            return Response(content=body.encode("utf-8"), status_code=status, media_type="application/json")
    raise exc


def create_app(
    config: ServiceConfig,
    *,
    transport=None,
    clock: Callable[[], float] = time.monotonic,
    generated_at=None,
    sleep: Callable[[float], None] = time.sleep,
) -> FastAPI:
    """Build the application around a config and optional injected transport.

    ``clock`` feeds the cache (tests substitute a virtual clock) and
    ``generated_at`` pins tree timestamps when replaying a fixture.
    """
    app = FastAPI(title="defigraph", version=__version__, docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.allowed_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    cache = TTLCache(config.cache_capacity, config.cache_ttl, clock)
    lookup_config = LookupConfig(
        endpoint=config.endpoint,
        language=config.language,
        max_sentences=config.max_sentences,
        max_per_kind=config.max_per_kind,
    )

    def lookup_cached(term: str) -> CacheEntry:
        keyword = normalize_keyword(term)
        key = f"{keyword.normalized}\n{config.language}"
        entry = cache.get(key)
        if entry is None:
            result = run_lookup(
                keyword.normalized,
                lookup_config,
                transport=transport,
                generated_at=generated_at,
                sleep=sleep,
            )
            entry = CacheEntry(
                key=key,
                definition=result.definition,
                tree_document=result.tree_document,
                inserted_at=clock(),
            )
            cache.put(key, entry)
        return entry

    @app.get("/api/define")
    def handle_define(term: str = "") -> Response:
        try:
            entry = lookup_cached(term)
        except Exception as exc:  # noqa: BLE001 - mapped exhaustively
            return _error_response(exc)
        return Response(content=_define_body(entry.definition), media_type="application/json")

    @app.get("/api/graph")
    def handle_graph(term: str = "") -> Response:
        try:
            entry = lookup_cached(term)
        except Exception as exc:  # noqa: BLE001 - mapped exhaustively
            return _error_response(exc)
        return Response(content=entry.tree_document, media_type=JSONLD_MEDIA_TYPE)

    @app.get("/api/health")
    def handle_health() -> Response:
        body = json.dumps({"status": "ok", "version": __version__})
        return Response(content=body.encode("utf-8"), media_type="application/json")

    if config.static_dir and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app

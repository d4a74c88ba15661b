"""HTTP search service.

Loads one index and one embedding table at startup and serves read-only
queries over them.  The engine is immutable, so any number of requests may
run concurrently without locks.  Configuration is a plain ``key=value``
file:

    index_path=/data/wiki.smix
    embeddings_path=/data/vectors.txt.gz
    default_alpha=0.55
    bind=127.0.0.1:8080
    max_limit=1000
    cors_origin=http://localhost:5173
    static_dir=frontend/dist
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query

from .bm25 import Bm25Params, score_documents
from .embeddings import check_alpha
from .engine import SearchEngine, SearchRequest

__all__ = ["ServiceConfig", "load_config", "create_app"]

_CONFIG_KEYS = {
    "index_path",
    "embeddings_path",
    "default_alpha",
    "bind",
    "max_limit",
    "cors_origin",
    "static_dir",
    "name",
}


@dataclass
class ServiceConfig:
    index_path: str
    embeddings_path: str
    default_alpha: float = 0.55
    bind: str = "127.0.0.1:8080"
    max_limit: int = 1000
    cors_origin: str | None = None
    static_dir: str | None = None
    name: str | None = None

    @property
    def host(self) -> str:
        return self.bind.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.bind.rsplit(":", 1)[1])


def load_config(path: str | Path) -> ServiceConfig:
    """Parse a key=value config file; '#' starts a comment line."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    for required in ("index_path", "embeddings_path"):
        if required not in values:
            raise ValueError(f"{path}: missing required key {required!r}")
    return ServiceConfig(
        index_path=values["index_path"],
        embeddings_path=values["embeddings_path"],
        default_alpha=float(values.get("default_alpha", 0.55)),
        bind=values.get("bind", "127.0.0.1:8080"),
        max_limit=int(values.get("max_limit", 1000)),
        cors_origin=values.get("cors_origin") or None,
        static_dir=values.get("static_dir") or None,
        name=values.get("name") or None,
    )


def _bad_request(detail: str) -> HTTPException:
    return HTTPException(status_code=400, detail=detail)


def _parse_float(value: str | None, default: float, name: str) -> float:
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        raise _bad_request(f"{name} must be a number") from None


def _parse_int(value: str | None, default: int, name: str, minimum: int = 0) -> int:
    if value is None:
        return default
    try:
        parsed = int(value)
    except ValueError:
        raise _bad_request(f"{name} must be an integer") from None
    if parsed < minimum:
        raise _bad_request(f"{name} must be >= {minimum}")
    return parsed


def create_app(engine: SearchEngine, config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="softmatcha", docs_url=None, redoc_url=None)

    if config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.get("/api/info")
    def info() -> dict:
        return {
            "corpus": config.name or engine.name,
            "n_tokens": engine.n_tokens,
            "vocab_size": len(engine.vocab),
            "doc_count": engine.doc_count,
            "embedding_dim": engine.embeddings.dim,
            "default_alpha": config.default_alpha,
        }

    @app.get("/api/search")
    def search(
        q: str = Query(default=""),
        alpha: str | None = None,
        limit: str | None = None,
        offset: str | None = None,
        context: str | None = None,
    ) -> dict:
        alpha_value = _parse_float(alpha, config.default_alpha, "alpha")
        try:
            check_alpha(alpha_value)
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        limit_value = min(
            _parse_int(limit, config.max_limit, "limit", minimum=1), config.max_limit
        )
        request = SearchRequest(
            query=q,
            alpha=alpha_value,
            limit=limit_value,
            offset=_parse_int(offset, 0, "offset"),
            context_window=_parse_int(context, 10, "context"),
        )
        try:
            response = engine.search(request)
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        return {
            "matches": [
                {
                    "doc_id": m.doc_id,
                    "start_offset": m.start_offset,
                    "tokens": m.tokens,
                    "scores": m.scores,
                    "min_score": m.min_score,
                    "left": m.left,
                    "right": m.right,
                }
                for m in response.matches
            ],
            "total_hits": response.total_hits,
            "oov_words": response.oov_words,
            "stats": {
                "n": response.stats.n,
                "k_total": response.stats.k_total,
                "soften_seconds": response.stats.soften_seconds,
                "match_seconds": response.stats.match_seconds,
            },
        }

    @app.get("/api/rank")
    def rank(
        patterns: list[str] = Query(default=[]),
        alpha: str | None = None,
        k1: str | None = None,
        b: str | None = None,
        limit: str | None = None,
    ) -> dict:
        if not patterns:
            raise _bad_request("at least one pattern is required")
        alpha_value = _parse_float(alpha, config.default_alpha, "alpha")
        try:
            check_alpha(alpha_value)
            params = Bm25Params(
                k1=_parse_float(k1, 1.2, "k1"), b=_parse_float(b, 0.75, "b")
            )
            ranking = score_documents(patterns, alpha_value, params, engine)
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        limit_value = _parse_int(limit, 0, "limit")
        if limit_value:
            ranking = ranking[:limit_value]
        return {
            "ranking": [{"doc_id": d, "score": s} for d, s in ranking],
        }

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True))

    return app

"""HTTP API over the engine: query console, groups, geography, topic-model
jobs, and summaries — everything the web UI and scripts consume.

All endpoints live under /api/v1 and speak UTF-8 JSON. Errors use structured
bodies {code, message, position?}. Long-running topic-model fits go through
an in-process FIFO job queue with one worker by default; clients poll
GET /api/v1/jobs/{id} for monotone progress. A static UI bundle, when built,
is served under /ui.
"""

from __future__ import annotations

import os
import queue
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Depends, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import analytics
from .embed import FileVectors, document_terms, embed_documents, fit_baseline
from .errors import (
    DuplicateName,
    GeolitError,
    QuerySyntaxError,
    RemoteError,
    RemoteTimeout,
    ScopeTooSmall,
    TooFewPoints,
    Unauthorized,
    UnknownDocument,
    UnknownField,
    UnknownGroup,
    UnknownModel,
    WrongKind,
)
from .store import Store
from .summarize import SummaryRequest, summarize_extractive, summarize_remote
from .topics.model import ModelConfig, fit_topic_model

DEFAULT_PORT = 8750


@dataclass
class ServiceSettings:
    """Runtime configuration; every field has a documented default.

    A config file in simple ``key = value`` lines can override any of them
    (see load_config).
    """

    port: int = DEFAULT_PORT
    data_dir: str = "./data"
    gazetteer_path: str | None = None      # bundled snapshot when unset
    embedding_source: str = "baseline"     # "baseline" | path to a vector file
    baseline_dim: int = 64
    default_seed: int = 42
    worker_count: int = 1
    remote_concurrency: int = 2
    summarize_endpoint: str = "https://api.openai.com/v1/chat/completions"
    summarize_model: str = "gpt-4o-mini"
    api_key_env: str = "GEOLIT_LLM_API_KEY"
    auth_token_env: str = "GEOLIT_API_TOKEN"

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceSettings":
        return cls(**load_config(path))


def load_config(path: str | Path) -> dict:
    """Parse a ``key = value`` config file into ServiceSettings kwargs."""
    out: dict = {}
    int_keys = {"port", "baseline_dim", "default_seed", "worker_count", "remote_concurrency"}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        out[key] = int(value) if key in int_keys else value
    return out


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class JobRunner:
    """In-process FIFO queue executing topic-model fits on worker threads."""

    def __init__(self, store: Store, settings: ServiceSettings):
        self.store = store
        self.settings = settings
        self._queue: "queue.Queue[dict | None]" = queue.Queue()
        self._threads: list[threading.Thread] = []
        self._stopping = False

    def start(self) -> None:
        for i in range(max(1, self.settings.worker_count)):
            t = threading.Thread(target=self._run, name=f"geolit-worker-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        """Graceful shutdown: drain queued work, then stop the workers."""
        self._stopping = True
        for _ in self._threads:
            self._queue.put(None)
        for t in self._threads:
            t.join(timeout=60)

    def submit_topic_model(self, name: str, scope_query: str, cfg: ModelConfig, seed: int) -> str:
        job_id = self.store.meta.next_id("job", "j")
        model_id = self.store.meta.next_id("model", "m")
        self.store.meta.put_job({
            "job_id": job_id,
            "kind": "topic_model",
            "status": "queued",
            "progress": 0.0,
            "created_at": _now(),
            "finished_at": None,
            "result_ref": None,
            "error": None,
        })
        self.store.meta.put_model_row({
            "model_id": model_id, "name": name, "status": "queued",
            "config": cfg.to_dict(), "seed": seed, "doc_ids": [], "topics": [],
            "deleted": False,
        })
        self._queue.put({
            "job_id": job_id, "model_id": model_id, "name": name,
            "query": scope_query, "config": cfg, "seed": seed,
        })
        return job_id

    def _run(self) -> None:
        while True:
            item = self._queue.get()
            if item is None:
                return
            try:
                self._fit(item)
            except Exception as exc:  # job failures land in the record, not the log
                self.store.meta.update_job(
                    item["job_id"], status="failed", error=str(exc), finished_at=_now()
                )
                try:
                    self.store.meta.set_model_status(item["model_id"], "failed")
                except GeolitError:
                    pass

    def _progress(self, job_id: str, value: float) -> None:
        self.store.meta.update_job(job_id, progress=round(min(max(value, 0.0), 1.0), 4))

    def _fit(self, item: dict) -> None:
        job_id, model_id = item["job_id"], item["model_id"]
        self.store.meta.update_job(job_id, status="running", progress=0.01)
        self.store.meta.set_model_status(model_id, "running")

        ids, _ = self.store.execute(item["query"])
        docs = [self.store.get_document(i) for i in ids]
        self._progress(job_id, 0.1)

        if self.settings.embedding_source == "baseline":
            vocab_size = len({t for d in docs for t in document_terms(d)})
            dim = max(2, min(self.settings.baseline_dim, len(docs), vocab_size))
            provider = fit_baseline(docs, dim, seed=item["seed"])
        else:
            provider = FileVectors.load(self.settings.embedding_source)
        embeddings = embed_documents(docs, provider)
        self._progress(job_id, 0.3)

        def tick(x: float) -> None:
            self._progress(job_id, 0.3 + 0.65 * x)

        fitted = fit_topic_model(
            docs, embeddings, item["config"], seed=item["seed"],
            model_id=model_id, name=item["name"], progress=tick,
        )
        self.store.persist_topic_model(fitted)
        self.store.meta.update_job(
            job_id, status="completed", progress=1.0,
            result_ref=model_id, finished_at=_now(),
        )


# --- request bodies -----------------------------------------------------------


class GroupBody(BaseModel):
    name: str
    query: str | None = None
    doc_ids: list[str] | None = None


class GroupSetBody(BaseModel):
    name: str
    group_ids: list[str]


class TopicModelBody(BaseModel):
    name: str
    query: str
    config: dict | None = None
    seed: int | None = None


class SummarizeBody(BaseModel):
    word_limit: int = 50
    mode: str = "extractive"  # "extractive" | "remote"


_STATUS_BY_ERROR: list[tuple[type, int, str]] = [
    (QuerySyntaxError, 400, "SyntaxError"),
    (UnknownField, 422, "UnknownField"),
    (ScopeTooSmall, 422, "ScopeTooSmall"),
    (WrongKind, 422, "WrongKind"),
    (TooFewPoints, 422, "TooFewPoints"),
    (DuplicateName, 409, "DuplicateName"),
    (UnknownGroup, 404, "UnknownGroup"),
    (UnknownDocument, 404, "UnknownDocument"),
    (UnknownModel, 404, "UnknownModel"),
    (Unauthorized, 401, "Unauthorized"),
    (RemoteTimeout, 502, "Timeout"),
    (RemoteError, 502, "RemoteError"),
]


def _error_response(exc: GeolitError) -> JSONResponse:
    for etype, status, code in _STATUS_BY_ERROR:
        if isinstance(exc, etype):
            body = {"code": code, "message": str(exc)}
            if isinstance(exc, QuerySyntaxError):
                body["position"] = exc.position
            return JSONResponse(status_code=status, content=body)
    return JSONResponse(status_code=500, content={"code": "Internal", "message": str(exc)})


def create_app(
    store: Store,
    gazetteer=None,
    settings: ServiceSettings | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    settings = settings or ServiceSettings()
    runner = JobRunner(store, settings)
    # rate-limit guard: bounded concurrent outbound LLM calls
    remote_slots = threading.Semaphore(max(1, settings.remote_concurrency))

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        runner.start()
        yield
        runner.stop()

    app = FastAPI(title="geolit", version="0.1.0", lifespan=lifespan)
    app.state.store = store
    app.state.runner = runner
    app.state.settings = settings

    @app.exception_handler(GeolitError)
    async def _handle_engine_error(_req: Request, exc: GeolitError):
        return _error_response(exc)

    async def require_auth(request: Request) -> None:
        token = os.environ.get(settings.auth_token_env, "")
        if not token:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise Unauthorized("missing or invalid bearer token")

    api = "/api/v1"
    auth = Depends(require_auth)

    def _doc_summary(doc_id: str) -> dict:
        doc = store.get_document(doc_id)
        return {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "year": doc.year,
            "journal": doc.journal,
            "geo_tags": sorted(doc.geo_tags),
            "category_labels": sorted(doc.category_labels),
        }

    @app.get(f"{api}/query", dependencies=[auth])
    def query_endpoint(q: str, offset: int = 0, limit: int = 20):
        ids, total = store.execute(q)
        page = ids[offset : offset + limit]
        return {
            "total": total,
            "doc_ids": page,
            "documents": [_doc_summary(i) for i in page],
            "offset": offset,
            "limit": limit,
        }

    @app.get(f"{api}/documents/{{doc_id}}", dependencies=[auth])
    def document_endpoint(doc_id: str):
        doc = store.get_document(doc_id)
        payload = store.index.get_payload(doc_id)
        return {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "abstract": doc.abstract,
            "authors": doc.authors,
            "year": doc.year,
            "doi": doc.doi,
            "journal": doc.journal,
            "fields_of_study": doc.fields_of_study,
            "category_labels": sorted(doc.category_labels),
            "geo_tags": sorted(doc.geo_tags),
            "geo_spans": payload.get("geo_spans", []),
            "group_ids": sorted(doc.group_ids),
            "topics": payload.get("topics", {}),
        }

    # --- groups ---------------------------------------------------------

    @app.post(f"{api}/groups", status_code=201, dependencies=[auth])
    def create_group_endpoint(body: GroupBody):
        if body.doc_ids is not None:
            doc_ids = body.doc_ids
        elif body.query:
            doc_ids, _ = store.execute(body.query)
        else:
            return JSONResponse(
                status_code=400,
                content={"code": "BadRequest", "message": "need query or doc_ids"},
            )
        group_id = store.create_group(body.name, doc_ids)
        row = store.meta.require_group(group_id)
        return {"group_id": group_id, "name": body.name, "member_count": row["member_count"]}

    @app.get(f"{api}/groups", dependencies=[auth])
    def list_groups_endpoint():
        return {"groups": store.list_groups()}

    @app.get(f"{api}/groups/{{group_id}}/documents", dependencies=[auth])
    def group_docs_endpoint(group_id: str, offset: int = 0, limit: int = 20):
        ids = store.get_group_docs(group_id)
        page = ids[offset : offset + limit]
        return {
            "total": len(ids),
            "doc_ids": page,
            "documents": [_doc_summary(i) for i in page],
            "offset": offset,
            "limit": limit,
        }

    @app.post(f"{api}/group-sets", status_code=201, dependencies=[auth])
    def create_group_set_endpoint(body: GroupSetBody):
        group_set_id = store.create_group_set(body.name, body.group_ids)
        return {"group_set_id": group_set_id, "name": body.name, "group_ids": body.group_ids}

    @app.get(f"{api}/group-sets", dependencies=[auth])
    def list_group_sets_endpoint():
        return {"group_sets": store.list_group_sets()}

    # --- topic models -----------------------------------------------------

    @app.post(f"{api}/topic-models", status_code=202, dependencies=[auth])
    def create_topic_model_endpoint(body: TopicModelBody):
        cfg = ModelConfig.from_dict(body.config or {})
        ids, total = store.execute(body.query)
        if total < cfg.min_cluster_size:
            raise ScopeTooSmall(
                f"scope has {total} documents, need >= {cfg.min_cluster_size}"
            )
        seed = body.seed if body.seed is not None else settings.default_seed
        job_id = runner.submit_topic_model(body.name, body.query, cfg, seed)
        return {"job_id": job_id}

    @app.get(f"{api}/jobs/{{job_id}}", dependencies=[auth])
    def job_endpoint(job_id: str):
        row = store.meta.get_job(job_id)
        if row is None:
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownJob", "message": f"no job {job_id!r}"},
            )
        return row

    @app.get(f"{api}/topic-models", dependencies=[auth])
    def list_models_endpoint():
        rows = store.list_topic_models()
        return {"models": [
            {
                "model_id": r["model_id"], "name": r["name"], "status": r["status"],
                "seed": r["seed"], "n_topics": len(r["topics"]),
                "n_docs": len(r["doc_ids"]),
            }
            for r in rows
        ]}

    @app.get(f"{api}/topic-models/{{model_id}}", dependencies=[auth])
    def model_endpoint(model_id: str):
        row = store.meta.require_model(model_id)
        return {
            "model_id": row["model_id"],
            "name": row["name"],
            "status": row["status"],
            "config": row["config"],
            "seed": row["seed"],
            "n_docs": len(row["doc_ids"]),
            "topics": [
                {
                    "topic_index": t["topic_index"],
                    "member_count": t["member_count"],
                    "top_terms": t["top_terms"],
                    "top_scores": [t["term_scores"][w] for w in t["top_terms"]],
                    "representative_doc_ids": t["representative_doc_ids"],
                    "summary": t.get("summary"),
                }
                for t in row["topics"]
            ],
        }

    @app.get(f"{api}/topic-models/{{model_id}}/topics/{{index}}/documents", dependencies=[auth])
    def topic_docs_endpoint(model_id: str, index: int, offset: int = 0, limit: int = 20):
        store.meta.require_model(model_id)
        ids = store.index.tag_postings(f"topic:{model_id}/{index}")
        page = ids[offset : offset + limit]
        return {
            "total": len(ids),
            "doc_ids": page,
            "documents": [_doc_summary(i) for i in page],
            "offset": offset,
            "limit": limit,
        }

    # --- geography ------------------------------------------------------------

    @app.get(f"{api}/geo", dependencies=[auth])
    def geo_endpoint(kind: str = "country", n: int = 0):
        table = analytics.mention_counts(store, kind)
        if n > 0:
            table = analytics.top_n(table, n)
        return {
            "kind": kind,
            "total_docs": table.total_docs,
            "entities": [
                {
                    "entry_id": r.entry_id,
                    "name": r.canonical_name,
                    "doc_count": r.doc_count,
                    "relative_frequency": r.relative_frequency,
                }
                for r in table.rows
            ],
        }

    @app.get(f"{api}/geo/{{entry_id}}/documents", dependencies=[auth])
    def geo_docs_endpoint(entry_id: str, offset: int = 0, limit: int = 20):
        entity = store.meta.geo_entities.get(entry_id)
        if entity is None:
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownEntity", "message": f"no geographic entity {entry_id!r}"},
            )
        ids = store.index.tag_postings(f"geo:{entry_id}")
        page = ids[offset : offset + limit]
        return {
            "entry_id": entry_id,
            "name": entity["name"],
            "kind": entity["kind"],
            "total": len(ids),
            "doc_ids": page,
            "documents": [_doc_summary(i) for i in page],
            "offset": offset,
            "limit": limit,
        }

    # --- analytics ----------------------------------------------------------------

    @app.get(f"{api}/analytics/top", dependencies=[auth])
    def analytics_top_endpoint(kind: str = "country", n: int = 10, q: str | None = None):
        table = analytics.top_n(analytics.mention_counts(store, kind, q), n)
        return analytics.chart_payload(table)

    @app.get(f"{api}/analytics/choropleth", dependencies=[auth])
    def choropleth_endpoint(q: str | None = None):
        table = analytics.mention_counts(store, "country", q)
        return {"rows": analytics.choropleth_export(table)}

    @app.get(f"{api}/analytics/intersections", dependencies=[auth])
    def intersections_endpoint(groups: str):
        group_ids = [g for g in groups.split(",") if g]
        matrix = analytics.group_intersections(store, group_ids)
        return {"group_ids": group_ids, "matrix": matrix}

    # --- summaries ---------------------------------------------------------------------

    @app.post(f"{api}/topics/{{model_id}}/{{index}}/summarize", dependencies=[auth])
    def summarize_endpoint(model_id: str, index: int, body: SummarizeBody):
        row = store.meta.require_model(model_id)
        topic = next((t for t in row["topics"] if t["topic_index"] == index), None)
        if topic is None:
            return JSONResponse(
                status_code=404,
                content={"code": "UnknownTopic", "message": f"model has no topic {index}"},
            )
        texts = [store.get_document(d).abstract for d in topic["representative_doc_ids"]]
        if body.mode == "remote":
            req = SummaryRequest(
                topic_index=index,
                doc_texts=texts,
                word_limit=body.word_limit,
                model_name=settings.summarize_model,
                endpoint=settings.summarize_endpoint,
                api_key_env=settings.api_key_env,
            )
            with remote_slots:
                summary = summarize_remote(req)
        else:
            summary = summarize_extractive(texts, body.word_limit, topic_index=index)
        store.meta.set_topic_summary(model_id, index, summary.text)
        return {
            "topic_index": summary.topic_index,
            "text": summary.text,
            "source": summary.source,
            "created_at": summary.created_at,
        }

    # --- UI bundle --------------------------------------------------------------------------

    resolved_ui = Path(ui_dir) if ui_dir else None
    if resolved_ui and resolved_ui.is_dir():
        app.mount("/ui", StaticFiles(directory=resolved_ui, html=True), name="ui")

    @app.get("/")
    def root():
        return {"service": "geolit", "api": api, "docs": "/docs"}

    return app

"""Batch driver for the pipeline: ingest -> geotag -> stats -> topic-model ->
summarize -> serve.

Every command is a thin composition of library calls. Human-readable output
goes to stdout (or a structured envelope with --json); logs go to stderr.
Exit codes: 0 success, 2 usage, 3 data error, 4 remote error.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import analytics
from .corpus import ingest as ingest_stream
from .embed import document_terms, embed_documents, fit_baseline
from .errors import GeolitError, RemoteError, RemoteTimeout, Unauthorized
from .geotag import Gazetteer, tag_document
from .store import Store
from .summarize import SummaryRequest, summarize_extractive, summarize_remote
from .topics.model import ModelConfig, fit_topic_model

EXIT_DATA_ERROR = 3
EXIT_REMOTE_ERROR = 4


def _emit(ctx: click.Context, command: str, data: dict, human: str) -> None:
    if ctx.obj.get("json"):
        click.echo(json.dumps({"command": command, "ok": True, "data": data}))
    else:
        click.echo(human)


def _fail(ctx: click.Context, command: str, exc: Exception, code: int) -> None:
    message = f"{type(exc).__name__}: {exc}"
    if ctx.obj.get("json"):
        click.echo(json.dumps({"command": command, "ok": False, "error": message}))
    else:
        click.echo(f"error: {message}", err=True)
    ctx.exit(code)


@click.group()
@click.option("--data-dir", default="./data", show_default=True, help="Store directory.")
@click.option("--json", "json_out", is_flag=True, help="Structured JSON output.")
@click.pass_context
def main(ctx: click.Context, data_dir: str, json_out: bool) -> None:
    """Geographic analytics and topic modeling over abstract corpora."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir
    ctx.obj["json"] = json_out


@main.command()
@click.argument("records_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def ingest(ctx: click.Context, records_file: str) -> None:
    """Parse and index a JSON Lines records file."""
    try:
        store = Store.open(ctx.obj["data_dir"])
        with open(records_file, encoding="utf-8") as fh:
            report = ingest_stream(fh, store)
        store.close()
    except GeolitError as exc:
        _fail(ctx, "ingest", exc, EXIT_DATA_ERROR)
        return
    rejected = " ".join(f"{k}={v}" for k, v in sorted(report.rejected_by_reason.items()))
    _emit(
        ctx, "ingest",
        {"accepted": report.accepted, "rejected_by_reason": report.rejected_by_reason},
        f"accepted={report.accepted} rejected={report.rejected}" + (f" ({rejected})" if rejected else ""),
    )


@main.command()
@click.option("--gazetteer", "gazetteer_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Gazetteer TSV (bundled snapshot when omitted).")
@click.option("--threads", default=1, show_default=True, help="Parallel tagging threads.")
@click.pass_context
def geotag(ctx: click.Context, gazetteer_path: str | None, threads: int) -> None:
    """Tag every stored document with geographic entities."""
    try:
        store = Store.open(ctx.obj["data_dir"])
        gaz = Gazetteer.load(gazetteer_path)
        doc_ids = store.doc_ids()
        docs = [store.get_document(i) for i in doc_ids]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                all_tags = list(pool.map(lambda d: tag_document(d, gaz), docs))
        else:
            all_tags = [tag_document(d, gaz) for d in docs]
        tagged = 0
        for doc, tags in zip(docs, all_tags):
            store.apply_geo_tags(doc.doc_id, tags, gaz)
            if tags:
                tagged += 1
        store.close()
    except GeolitError as exc:
        _fail(ctx, "geotag", exc, EXIT_DATA_ERROR)
        return
    _emit(
        ctx, "geotag",
        {"documents": len(doc_ids), "tagged": tagged},
        f"documents={len(doc_ids)} tagged={tagged}",
    )


@main.command()
@click.option("--kind", type=click.Choice(["country", "state", "city"]), default="country",
              show_default=True)
@click.option("--top", "top", default=10, show_default=True, help="Rows to print (0 = all).")
@click.option("--csv", "as_csv", is_flag=True, help="CSV output (name,count,relative_frequency).")
@click.option("--query", "scope", default=None, help="Optional scope query.")
@click.pass_context
def stats(ctx: click.Context, kind: str, top: int, as_csv: bool, scope: str | None) -> None:
    """Location-frequency table for the stored corpus."""
    try:
        store = Store.open(ctx.obj["data_dir"])
        table = analytics.mention_counts(store, kind, scope)
        if top > 0:
            table = analytics.top_n(table, top)
        store.close()
    except GeolitError as exc:
        _fail(ctx, "stats", exc, EXIT_DATA_ERROR)
        return
    if as_csv and not ctx.obj.get("json"):
        click.echo(analytics.to_csv(table), nl=False)
        return
    rows = [
        {"entry_id": r.entry_id, "name": r.canonical_name,
         "doc_count": r.doc_count, "relative_frequency": r.relative_frequency}
        for r in table.rows
    ]
    human = "\n".join(
        f"{r.canonical_name},{r.doc_count},{r.relative_frequency}" for r in table.rows
    ) or "(no rows)"
    _emit(ctx, "stats", {"kind": kind, "total_docs": table.total_docs, "rows": rows}, human)


@main.command("topic-model")
@click.option("--query", "scope", required=True, help="Scope query for the fit.")
@click.option("--name", required=True, help="User-assigned model name.")
@click.option("--seed", default=42, show_default=True)
@click.option("--min-cluster-size", default=10, show_default=True)
@click.option("--reducer", type=click.Choice(["truncated-svd", "neighbor-graph"]),
              default="truncated-svd", show_default=True)
@click.option("--target-dim", default=5, show_default=True)
@click.option("--baseline-dim", default=64, show_default=True,
              help="Latent dimension of the baseline embedding fit.")
@click.option("--embeddings", "vectors_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Precomputed vector file instead of the baseline.")
@click.pass_context
def topic_model(ctx, scope, name, seed, min_cluster_size, reducer, target_dim,
                baseline_dim, vectors_path) -> None:
    """Fit a topic model over a query scope and persist it."""
    try:
        store = Store.open(ctx.obj["data_dir"])
        ids, total = store.execute(scope)
        cfg = ModelConfig(reducer=reducer, target_dim=target_dim,
                          min_cluster_size=min_cluster_size)
        docs = [store.get_document(i) for i in ids]
        if vectors_path:
            from .embed import FileVectors

            provider = FileVectors.load(vectors_path)
        else:
            vocab_size = len({t for d in docs for t in document_terms(d)})
            dim = max(2, min(baseline_dim, len(docs), vocab_size))
            provider = fit_baseline(docs, dim, seed=seed)
        embeddings = embed_documents(docs, provider)
        model_id = store.meta.next_id("model", "m")
        model = fit_topic_model(docs, embeddings, cfg, seed=seed,
                                model_id=model_id, name=name)
        store.persist_topic_model(model)
        artifact = Path(ctx.obj["data_dir"]) / "models" / f"{model_id}.json"
        artifact.parent.mkdir(parents=True, exist_ok=True)
        model.save(artifact)
        store.close()
    except GeolitError as exc:
        _fail(ctx, "topic-model", exc, EXIT_DATA_ERROR)
        return
    lines = [f"model_id={model_id} docs={total} topics={len(model.topics)} "
             f"noise={sum(1 for a in model.assignments if a == -1)}"]
    for t in model.topics:
        terms = ", ".join(
            f"{w} ({t.term_scores[w]:.3f})" for w in t.top_terms
        )
        lines.append(f"Topic {t.topic_index} ({t.member_count} docs): {terms}")
    _emit(
        ctx, "topic-model",
        {
            "model_id": model_id,
            "n_docs": total,
            "topics": [
                {"topic_index": t.topic_index, "member_count": t.member_count,
                 "top_terms": t.top_terms,
                 "top_scores": [t.term_scores[w] for w in t.top_terms]}
                for t in model.topics
            ],
            "artifact": str(artifact),
        },
        "\n".join(lines),
    )


@main.command()
@click.option("--model", "model_id", required=True)
@click.option("--topic", "topic_index", required=True, type=int)
@click.option("--extractive", is_flag=True, help="Use the offline extractive summarizer.")
@click.option("--word-limit", default=50, show_default=True)
@click.option("--endpoint", default="https://api.openai.com/v1/chat/completions",
              show_default=True)
@click.option("--llm-model", default="gpt-4o-mini", show_default=True)
@click.option("--api-key-env", default="GEOLIT_LLM_API_KEY", show_default=True)
@click.pass_context
def summarize(ctx, model_id, topic_index, extractive, word_limit,
              endpoint, llm_model, api_key_env) -> None:
    """Summarize one topic from its representative documents."""
    try:
        store = Store.open(ctx.obj["data_dir"])
        row = store.meta.require_model(model_id)
        topic = next((t for t in row["topics"] if t["topic_index"] == topic_index), None)
        if topic is None:
            raise GeolitError(f"model {model_id} has no topic {topic_index}")
        texts = [store.get_document(d).abstract for d in topic["representative_doc_ids"]]
        if extractive:
            summary = summarize_extractive(texts, word_limit, topic_index=topic_index)
        else:
            req = SummaryRequest(
                topic_index=topic_index, doc_texts=texts, word_limit=word_limit,
                model_name=llm_model, endpoint=endpoint, api_key_env=api_key_env,
            )
            summary = summarize_remote(req)
        store.meta.set_topic_summary(model_id, topic_index, summary.text)
        store.close()
    except (Unauthorized, RemoteError, RemoteTimeout) as exc:
        _fail(ctx, "summarize", exc, EXIT_REMOTE_ERROR)
        return
    except GeolitError as exc:
        _fail(ctx, "summarize", exc, EXIT_DATA_ERROR)
        return
    _emit(
        ctx, "summarize",
        {"topic_index": summary.topic_index, "text": summary.text, "source": summary.source},
        f"[{summary.source}] {summary.text}",
    )


@main.command()
@click.argument("query_text")
@click.option("--limit", default=10, show_default=True)
@click.option("--offset", default=0, show_default=True)
@click.pass_context
def query(ctx: click.Context, query_text: str, limit: int, offset: int) -> None:
    """Run a boolean query and print matching documents."""
    try:
        store = Store.open(ctx.obj["data_dir"])
        ids, total = store.execute(query_text)
        page = ids[offset : offset + limit]
        titles = {i: store.get_document(i).title for i in page}
        store.close()
    except GeolitError as exc:
        _fail(ctx, "query", exc, EXIT_DATA_ERROR)
        return
    lines = [f"total={total}"] + [f"{i}\t{titles[i]}" for i in page]
    _emit(ctx, "query", {"total": total, "doc_ids": page}, "\n".join(lines))


@main.command()
@click.option("--port", default=8750, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="key = value settings file.")
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None,
              help="Static UI bundle to serve under /ui.")
@click.pass_context
def serve(ctx, port: int, host: str, config_path: str | None, ui_dir: str | None) -> None:
    """Serve the HTTP API (and the UI bundle when present)."""
    import uvicorn

    from .service import ServiceSettings, create_app

    try:
        settings = ServiceSettings.from_file(config_path) if config_path else ServiceSettings()
        settings.port = port
        settings.data_dir = ctx.obj["data_dir"]
        store = Store.open(settings.data_dir)
        default_ui = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        bundle = ui_dir or (str(default_ui) if default_ui.is_dir() else None)
        app = create_app(store, settings=settings, ui_dir=bundle)
    except GeolitError as exc:
        _fail(ctx, "serve", exc, EXIT_DATA_ERROR)
        return
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()

"""Walkthrough: topic summaries (extractive + remote contract) and the HTTP API.

The remote summarizer speaks a generic chat-completions contract; here a mock
transport stands in for the endpoint so the demo runs offline. The service
section drives the same async job flow the web UI uses.

Run from the repo root:  python demos/04_summaries_and_service.py
"""

import json
import os
import tempfile

import httpx
from fastapi.testclient import TestClient

from geolit import Gazetteer, Store, SummaryRequest, ingest, tag_document
from geolit.summarize import build_prompt, summarize_extractive, summarize_remote

# --- extractive: deterministic, offline, no hallucination by construction

texts = [
    "Water conservation programs expanded in urban districts. Storage deficits "
    "persisted through consecutive dry winters.",
    "Option contracts for dry-year water transfers increased realized gains in trade.",
]
summary = summarize_extractive(texts, word_limit=30)
print("extractive:", summary.text)

# --- remote: same request object, generic chat-completions body

request = SummaryRequest(topic_index=0, doc_texts=texts, word_limit=50,
                         model_name="any-chat-model", api_key_env="DEMO_LLM_KEY",
                         endpoint="https://llm.example/v1/chat/completions")
print("\nprompt sent to the endpoint:\n" + build_prompt(request)[:160] + "...")

os.environ["DEMO_LLM_KEY"] = "demo-key"
stub = httpx.MockTransport(lambda req: httpx.Response(
    200, json={"choices": [{"message": {"content": "Drought risk reshapes water markets."}}]}
))
remote = summarize_remote(request, transport=stub, sleep=lambda s: None)
print(f"remote ({remote.source}): {remote.text}")

# --- the service: query console, groups, async topic-model job, summary ----

from geolit.service import ServiceSettings, create_app

RECORDS = [
    {"id": f"w{i}", "title": "water", "abstract":
        "Drought cut reservoir storage and tightened allocation in Canada region "
        + "scarcity " * (i % 3 + 2)}
    for i in range(12)
] + [
    {"id": f"f{i}", "title": "fire", "abstract":
        "Wildfire smoke and fuel aridity lengthened burn seasons across Australia "
        + "ignition " * (i % 3 + 2)}
    for i in range(12)
]

with tempfile.TemporaryDirectory() as tmp:
    store = Store.open(tmp)
    ingest((json.dumps(r) for r in RECORDS), store)
    gaz = Gazetteer.load()
    for doc_id in store.doc_ids():
        store.apply_geo_tags(doc_id, tag_document(store.get_document(doc_id), gaz), gaz)

    app = create_app(store, settings=ServiceSettings(baseline_dim=16))
    with TestClient(app) as client:  # lifespan starts the job worker
        total = client.get("/api/v1/query", params={"q": "geo:Canada"}).json()["total"]
        print(f"\nGET /query geo:Canada -> {total} documents")

        group = client.post("/api/v1/groups",
                            json={"name": "canada", "query": "geo:Canada"}).json()
        print("POST /groups ->", group)

        job_id = client.post("/api/v1/topic-models", json={
            "name": "demo", "query": "drought OR wildfire",
            "config": {"min_cluster_size": 8}, "seed": 42,
        }).json()["job_id"]
        import time
        while True:
            job = client.get(f"/api/v1/jobs/{job_id}").json()
            if job["status"] in ("completed", "failed"):
                break
            time.sleep(0.05)
        print(f"job {job_id}: {job['status']} (progress {job['progress']})")

        model = client.get(f"/api/v1/topic-models/{job['result_ref']}").json()
        for topic in model["topics"]:
            print(f"  topic {topic['topic_index']}: {topic['top_terms'][:4]}")

        out = client.post(
            f"/api/v1/topics/{job['result_ref']}/0/summarize",
            json={"mode": "extractive", "word_limit": 30},
        ).json()
        print("summary:", out["text"][:100])
    store.close()

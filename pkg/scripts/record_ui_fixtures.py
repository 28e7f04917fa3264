"""Record real API responses into frontend/tests/fixtures/.

Boots the service on a deterministic fixture store, drives the same flow the
UI performs, and freezes the JSON bodies the contract tests replay.

Run from the repo root:  python scripts/record_ui_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
import time
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from geolit.corpus import ingest
from geolit.geotag import Gazetteer, tag_document
from geolit.service import ServiceSettings, create_app
from geolit.store import Store

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "tests" / "fixtures"

THEMES = {
    "hydro": ["flood", "river", "levee", "rainfall", "basin"],
    "fire": ["wildfire", "smoke", "burn", "fuel", "ignition"],
    "ice": ["glacier", "permafrost", "thaw", "tundra", "melt"],
}
PLACES = ["Canada", "Nigeria", "California", "Svalbard", "Tokyo", "Kenya", "India", "Brazil"]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(31)
    with tempfile.TemporaryDirectory() as tmp:
        store = Store.open(tmp)
        gaz = Gazetteer.load()
        lines = []
        n = 0
        for name, vocab in THEMES.items():
            for i in range(18):
                words = " ".join(rng.choice(vocab, size=22, replace=True))
                place = PLACES[n % len(PLACES)]
                lines.append(json.dumps({
                    "id": f"{name}-{i:02d}", "title": f"{name} study {i}",
                    "abstract": f"Impacts near {place}: {words}.",
                    "year": 2012 + i % 10,
                }))
                n += 1
        ingest(lines, store)
        for doc_id in store.doc_ids():
            doc = store.get_document(doc_id)
            store.apply_geo_tags(doc_id, tag_document(doc, gaz), gaz)

        app = create_app(store, settings=ServiceSettings(baseline_dim=16))
        with TestClient(app) as client:
            def save(name: str, payload) -> None:
                (OUT / f"{name}.json").write_text(
                    json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8"
                )

            save("query_geo_canada", client.get(
                "/api/v1/query", params={"q": "geo:Canada"}).json())
            save("analytics_top_country", client.get(
                "/api/v1/analytics/top", params={"kind": "country", "n": 10}).json())
            save("choropleth", client.get("/api/v1/analytics/choropleth").json())
            save("geo_country", client.get("/api/v1/geo", params={"kind": "country"}).json())

            job_id = client.post("/api/v1/topic-models", json={
                "name": "fixture-themes",
                "query": "flood OR wildfire OR glacier OR river OR smoke OR thaw",
                "config": {"min_cluster_size": 10},
                "seed": 42,
            }).json()["job_id"]
            snapshots = []
            while True:
                job = client.get(f"/api/v1/jobs/{job_id}").json()
                snapshots.append(job)
                if job["status"] in ("completed", "failed"):
                    break
                time.sleep(0.02)
            assert job["status"] == "completed", job
            save("job_sequence", snapshots)

            model = client.get(f"/api/v1/topic-models/{job['result_ref']}").json()
            save("topic_model", model)

            summary = client.post(
                f"/api/v1/topics/{job['result_ref']}/0/summarize",
                json={"mode": "extractive", "word_limit": 40},
            ).json()
            save("summary", summary)
        store.close()
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()

"""Walkthrough: parse abstract records, ingest them, assign hazard categories.

Run from the repo root:  python demos/01_ingest_and_categorize.py
Everything happens in a temp directory; nothing is left behind.
"""

import json
import tempfile

from geolit import Document, FilterConfig, Store, assign_categories, ingest
from geolit.corpus import embed_categories, load_categories
from geolit.embed import embed_documents, fit_baseline

# --- 1. a few raw records, exactly the JSON Lines shape the engine ingests

RECORDS = [
    {"id": "a1", "title": "Levee stress under compound floods",
     "abstract": "Compound riverine and pluvial flooding increases levee overtopping risk "
                 "and floodplain exposure during consecutive storm seasons.", "year": 2021},
    {"id": "a2", "title": "Megafire smoke transport",
     "abstract": "Wildfire smoke plumes degrade air quality far downwind, with particulate "
                 "pollution spiking during prolonged burn seasons.", "year": 2022},
    {"id": "a3", "title": "Reservoir drawdown economics",
     "abstract": "Prolonged drought lowers reservoir storage, tightening water allocation "
                 "and raising the cost of agricultural water scarcity.", "year": 2020},
]

with tempfile.TemporaryDirectory() as tmp:
    store = Store.open(tmp)
    report = ingest((json.dumps(r) for r in RECORDS), store)
    print(f"ingest -> accepted={report.accepted} rejected={report.rejected}")

    # re-running the same stream is a no-op: first writer wins
    rerun = ingest((json.dumps(r) for r in RECORDS), store)
    print(f"re-ingest -> accepted={rerun.accepted} rejected={rerun.rejected_by_reason}")

    # --- 2. hazard categories: the 18 definitions ship as editable data

    categories = load_categories()
    print(f"\n{len(categories)} bundled hazard categories, e.g. "
          f"{[c.category_id for c in categories[:4]]}")

    # embed definitions and documents in one shared latent space; at desk
    # scale the deterministic TF-IDF+SVD baseline stands in for a
    # sentence-transformer (bring real vectors via FileVectors for fidelity)
    docs = [store.get_document(i) for i in store.doc_ids()]
    definition_docs = [Document(doc_id=c.category_id, abstract=c.definition) for c in categories]
    baseline = fit_baseline(docs + definition_docs, dim=12)
    embed_categories(categories, baseline)
    matrix = embed_documents(docs, baseline)

    # --- 3. cosine filter: any category at or above the threshold sticks

    cfg = FilterConfig(threshold=0.10, assign_mode="any")
    for doc, row in zip(docs, matrix.rows):
        labels = assign_categories(row, categories, cfg)
        store.index.set_categories(doc.doc_id, labels)
        print(f"{doc.doc_id}: {sorted(labels)}")

    # category tags become queryable facets immediately
    ids, total = store.execute("category:flood")
    print(f"\nquery category:flood -> {ids} (total {total})")
    store.close()

"""Walkthrough: two-stage geotagging and location-frequency analytics.

Run from the repo root:  python demos/02_geotag_and_analytics.py
"""

import json
import tempfile

from geolit import Gazetteer, Store, extract_mentions, ingest, resolve, tag_document
from geolit import analytics

ABSTRACTS = {
    "g1": "Flooding in New Orleans increased after levee subsidence accelerated.",
    "g2": "Georgia farmers adapted while Atlanta utilities hardened substations.",
    "g3": "Georgia signed a Black Sea grain accord amid drought pressure.",
    "g4": "Svalbard permafrost thaw outpaces projections from a decade ago.",
    "g5": "Canada and the United States coordinated wildfire smoke advisories.",
    "g6": "Canada expanded peatland monitoring across boreal provinces.",
}

gaz = Gazetteer.load()

# --- stage 1: candidate spans (trie over aliases, longest match wins)

spans = extract_mentions(ABSTRACTS["g2"], gaz)
print("candidates in g2:", [(s.surface, s.candidate_entry_ids) for s in spans])

# --- stage 2: disambiguation. "Georgia" next to "Atlanta" resolves to the US
# state (context rule); bare "Georgia" prefers the country (kind order).

tag = resolve(spans[0], spans, gaz)
print(f"g2 Georgia -> {tag.entry_id} (confidence {tag.confidence})")

spans3 = extract_mentions(ABSTRACTS["g3"], gaz)
tag3 = resolve(spans3[0], spans3, gaz)
print(f"g3 Georgia -> {tag3.entry_id} (confidence {tag3.confidence})")

# --- whole-corpus tagging + abstract-level counting

with tempfile.TemporaryDirectory() as tmp:
    store = Store.open(tmp)
    lines = (json.dumps({"id": k, "title": k, "abstract": v}) for k, v in ABSTRACTS.items())
    ingest(lines, store)
    for doc_id in store.doc_ids():
        doc = store.get_document(doc_id)
        store.apply_geo_tags(doc_id, tag_document(doc, gaz), gaz)

    table = analytics.mention_counts(store, "country")
    print("\ncountry frequencies (doc-level, not mention-level):")
    print(analytics.to_csv(table), end="")

    # chart-ready exports: the same numbers the web UI consumes
    print("\nchart payload:", analytics.chart_payload(analytics.top_n(table, 3)))
    print("choropleth:", analytics.choropleth_export(table))

    # states rank globally: Svalbard (Norway) sits beside US states
    states = analytics.mention_counts(store, "state")
    print("state rows:", [(r.canonical_name, r.doc_count) for r in states.rows])
    store.close()

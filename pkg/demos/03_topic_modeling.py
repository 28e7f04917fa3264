"""Walkthrough: density-based topic modeling over a geographically scoped set.

Reduce -> cluster (mutual reachability + condensed-tree selection) ->
c-TF-IDF terms -> representative documents. Cluster count is emergent;
there is no K parameter anywhere.

Run from the repo root:  python demos/03_topic_modeling.py
"""

import numpy as np

from geolit import Document, ModelConfig, fit_topic_model
from geolit.embed import embed_documents, fit_baseline
from geolit.topics import ctfidf, hdbscan_labels, mutual_reachability

# --- the clustering core on raw points first ------------------------------

points = np.array([[0.0], [0.1], [0.2], [10.0], [10.1], [10.2]])
print("mutual reachability (min_samples=2):")
print(mutual_reachability(points, 2).round(2))
print("labels:", hdbscan_labels(points, min_cluster_size=3))  # two clusters, no noise

# --- c-TF-IDF on toy clusters ---------------------------------------------

scores = ctfidf([{"flood": 2, "river": 1}, {"fire": 1, "forest": 1}])
print("\nW(flood, cluster A) =", round(scores[0]["flood"], 4))  # 2*ln(1+2.5/2)

# --- end to end on a planted corpus ------------------------------------------

rng = np.random.default_rng(42)
themes = {
    "water": ["drought", "reservoir", "aquifer", "allocation", "scarcity"],
    "fire": ["wildfire", "smoke", "fuel", "ignition", "suppression"],
    "coast": ["surge", "erosion", "shoreline", "inundation", "retreat"],
}
docs = []
for name, vocab in themes.items():
    for i in range(20):
        docs.append(Document(
            doc_id=f"{name}-{i:02d}",
            title=f"{name} impacts",
            abstract=" ".join(rng.choice(vocab, size=25, replace=True)),
        ))

baseline = fit_baseline(docs, dim=8, seed=42)
embeddings = embed_documents(docs, baseline)
model = fit_topic_model(
    docs, embeddings,
    ModelConfig(reducer="truncated-svd", target_dim=5, min_cluster_size=10),
    seed=42, model_id="demo", name="three planted themes",
)

noise = sum(1 for a in model.assignments if a == -1)
print(f"\nfitted {len(model.topics)} topics over {len(docs)} docs ({noise} noise)")
for topic in model.topics:
    terms = ", ".join(topic.top_terms[:5])
    print(f"  Topic {topic.topic_index} ({topic.member_count} docs): {terms}")
    print(f"    representatives: {topic.representative_doc_ids}")

# same seed, same bytes: the artifact is reproducible
import tempfile
from pathlib import Path

with tempfile.TemporaryDirectory() as tmp:
    a, b = Path(tmp, "a.json"), Path(tmp, "b.json")
    model.save(a)
    fit_topic_model(docs, embeddings, model.config, seed=42,
                    model_id="demo", name="three planted themes").save(b)
    print("\nbyte-identical refit:", a.read_bytes() == b.read_bytes())

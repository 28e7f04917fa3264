"""Topic model assembly: cluster term scoring, representatives, fitting.

Term importance per cluster uses the class-based TF-IDF refinement
W(t, c) = tf(t, c) * ln(1 + A / f(t)), with tf counted over the cluster's
concatenated text, f(t) the term's total count across clusters, and A the
average token count per cluster. Representative documents are the members
whose score-weighted term vectors point closest (cosine) to the cluster's
score vector.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ..embed import EmbeddingMatrix, document_terms
from ..errors import EmptyCluster, EmptyTopic, TooFewPoints
from .density import hdbscan_labels
from .reducers import reduce_embeddings

ARTIFACT_VERSION = 1


@dataclass
class ModelConfig:
    reducer: str = "truncated-svd"  # "truncated-svd" | "neighbor-graph"
    target_dim: int = 5
    min_cluster_size: int = 10
    min_samples: int | None = None  # defaults to min_cluster_size
    n_neighbors: int = 15
    top_k_terms: int = 10
    n_representatives: int = 3

    def __post_init__(self):
        if self.min_cluster_size < 2:
            raise ValueError("min_cluster_size must be >= 2")
        if self.target_dim < 2:
            raise ValueError("target_dim must be >= 2")

    @property
    def effective_min_samples(self) -> int:
        return self.min_samples if self.min_samples is not None else self.min_cluster_size

    def to_dict(self) -> dict:
        return {
            "reducer": self.reducer,
            "target_dim": self.target_dim,
            "min_cluster_size": self.min_cluster_size,
            "min_samples": self.min_samples,
            "n_neighbors": self.n_neighbors,
            "top_k_terms": self.top_k_terms,
            "n_representatives": self.n_representatives,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ModelConfig":
        return cls(**{k: raw[k] for k in cls().to_dict() if k in raw})


@dataclass
class Topic:
    topic_index: int
    term_scores: dict[str, float]
    top_terms: list[str]
    representative_doc_ids: list[str]
    member_count: int
    summary: str | None = None


@dataclass
class TopicModel:
    model_id: str
    name: str
    doc_ids: list[str]
    assignments: list[int]  # -1 = noise
    topics: list[Topic]
    config: ModelConfig
    seed: int

    def to_dict(self) -> dict:
        return {
            "version": ARTIFACT_VERSION,
            "model_id": self.model_id,
            "name": self.name,
            "doc_ids": self.doc_ids,
            "assignments": self.assignments,
            "config": self.config.to_dict(),
            "seed": self.seed,
            "topics": [
                {
                    "topic_index": t.topic_index,
                    "term_scores": {k: t.term_scores[k] for k in sorted(t.term_scores)},
                    "top_terms": t.top_terms,
                    "representative_doc_ids": t.representative_doc_ids,
                    "member_count": t.member_count,
                    "summary": t.summary,
                }
                for t in self.topics
            ],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TopicModel":
        return cls(
            model_id=raw["model_id"],
            name=raw["name"],
            doc_ids=list(raw["doc_ids"]),
            assignments=[int(a) for a in raw["assignments"]],
            topics=[
                Topic(
                    topic_index=int(t["topic_index"]),
                    term_scores={k: float(v) for k, v in t["term_scores"].items()},
                    top_terms=list(t["top_terms"]),
                    representative_doc_ids=list(t["representative_doc_ids"]),
                    member_count=int(t["member_count"]),
                    summary=t.get("summary"),
                )
                for t in raw["topics"]
            ],
            config=ModelConfig.from_dict(raw["config"]),
            seed=int(raw["seed"]),
        )

    def save(self, path: str | Path) -> None:
        """Write the canonical artifact file (stable bytes for a fixed model)."""
        Path(path).write_text(dumps_canonical(self.to_dict()), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TopicModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def dumps_canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def ctfidf(cluster_token_counts: Sequence[dict[str, int] | Counter]) -> list[dict[str, float]]:
    """Class-based TF-IDF scores per cluster.

    W(t, c) = tf(t, c) * ln(1 + A / f(t)); terms absent from a cluster simply
    do not appear in its score map (score zero).
    """
    counts = [Counter(c) for c in cluster_token_counts]
    if not counts:
        raise EmptyCluster("no clusters to score")
    totals = [sum(c.values()) for c in counts]
    for idx, total in enumerate(totals):
        if total == 0:
            raise EmptyCluster(f"cluster {idx} has no tokens")
    avg_tokens = sum(totals) / len(counts)
    freq: Counter = Counter()
    for c in counts:
        freq.update(c)
    scores: list[dict[str, float]] = []
    for c in counts:
        scores.append({
            t: tf * math.log(1.0 + avg_tokens / freq[t]) for t, tf in c.items()
        })
    return scores


def top_terms(term_scores: dict[str, float], k: int) -> list[str]:
    """Top-k terms by score descending, ties broken lexicographically."""
    return [t for t, _ in sorted(term_scores.items(), key=lambda ts: (-ts[1], ts[0]))[:k]]


def representative_docs(
    member_doc_ids: Sequence[str],
    member_token_counts: Sequence[dict[str, int] | Counter],
    term_scores: dict[str, float],
    m: int,
) -> list[str]:
    """Members ranked by cosine of score-weighted term vector vs score vector.

    Ties break by ascending doc id. m must be >= 1; a topic with no members
    has no representatives (EmptyTopic).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not member_doc_ids:
        raise EmptyTopic("topic has no members")
    terms = sorted(term_scores)
    tix = {t: i for i, t in enumerate(terms)}
    topic_vec = np.array([term_scores[t] for t in terms])
    topic_norm = float(np.linalg.norm(topic_vec))

    ranked: list[tuple[float, str]] = []
    for doc_id, counts in zip(member_doc_ids, member_token_counts):
        vec = np.zeros(len(terms))
        for t, tf in Counter(counts).items():
            i = tix.get(t)
            if i is not None:
                vec[i] = tf * topic_vec[i]
        norm = float(np.linalg.norm(vec))
        sim = float(vec @ topic_vec / (norm * topic_norm)) if norm > 0 and topic_norm > 0 else 0.0
        ranked.append((sim, doc_id))
    ranked.sort(key=lambda sd: (-sd[0], sd[1]))
    return [doc_id for _, doc_id in ranked[:m]]


def fit_topic_model(
    docs: Sequence,
    embeddings: EmbeddingMatrix,
    cfg: ModelConfig | None = None,
    seed: int = 42,
    model_id: str = "",
    name: str = "",
    progress: Callable[[float], None] | None = None,
) -> TopicModel:
    """Reduce -> cluster -> score terms -> pick representatives.

    Deterministic for a fixed seed. Topics are ordered by member count
    descending (topic 0 is the largest); noise keeps index -1.
    """
    cfg = cfg or ModelConfig()
    docs = list(docs)
    if len(docs) < cfg.min_cluster_size:
        raise TooFewPoints(
            f"{len(docs)} documents < min_cluster_size={cfg.min_cluster_size}"
        )
    by_id = {d.doc_id: d for d in docs}
    if list(embeddings.doc_ids) != [d.doc_id for d in docs]:
        docs = [by_id[i] for i in embeddings.doc_ids]

    def tick(x: float) -> None:
        if progress is not None:
            progress(x)

    reduced = reduce_embeddings(embeddings.rows, cfg, seed=seed)
    tick(0.4)
    assignments = hdbscan_labels(
        reduced, cfg.min_cluster_size, cfg.effective_min_samples
    )
    tick(0.6)

    n_topics = int(assignments.max()) + 1 if assignments.size else 0
    doc_tokens = [Counter(document_terms(d)) for d in docs]
    topics: list[Topic] = []
    if n_topics > 0:
        member_idx = [np.flatnonzero(assignments == k) for k in range(n_topics)]
        cluster_counts = []
        for idx in member_idx:
            agg: Counter = Counter()
            for i in idx:
                agg.update(doc_tokens[i])
            cluster_counts.append(agg)
        scores = ctfidf(cluster_counts)
        tick(0.8)
        for k in range(n_topics):
            idx = member_idx[k]
            member_ids = [docs[i].doc_id for i in idx]
            reps = representative_docs(
                member_ids,
                [doc_tokens[i] for i in idx],
                scores[k],
                cfg.n_representatives,
            )
            topics.append(Topic(
                topic_index=k,
                term_scores=scores[k],
                top_terms=top_terms(scores[k], cfg.top_k_terms),
                representative_doc_ids=reps,
                member_count=int(idx.size),
            ))
    tick(1.0)
    return TopicModel(
        model_id=model_id,
        name=name,
        doc_ids=[d.doc_id for d in docs],
        assignments=[int(a) for a in assignments],
        topics=topics,
        config=cfg,
        seed=seed,
    )

"""Abstract-record parsing, ingest, and hazard-category assignment.

Records arrive as UTF-8 JSON Lines with fields `id`, `title`, `authors`,
`abstract`, `year`, `doi`, `journal`, `fields_of_study`. Category definitions
are data, not code: each line of the bundled (editable) definitions file holds
`category_id`, `name`, `definition`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .embed import cosine
from .errors import DimensionMismatch, MalformedRecord, MissingAbstract

# Abstracts shorter than this (after trim) are rejected at ingest as noise.
MIN_ABSTRACT_CHARS = 20

DEFAULT_THRESHOLD = 0.35


@dataclass
class Document:
    """One abstract-level record plus the labels the engine attaches to it."""

    doc_id: str
    title: str = ""
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    year: int | None = None
    doi: str | None = None
    journal: str | None = None
    fields_of_study: list[str] = field(default_factory=list)
    category_labels: set[str] = field(default_factory=set)
    geo_tags: set[str] = field(default_factory=set)
    group_ids: set[str] = field(default_factory=set)


@dataclass
class CategoryDef:
    category_id: str
    name: str
    definition: str
    definition_embedding: np.ndarray | None = None


@dataclass
class FilterConfig:
    """Similarity cut for category assignment.

    assign_mode: "any" keeps every category at or above the threshold;
    "top1" keeps only the best-scoring category, and only if it clears
    the threshold.
    """

    threshold: float = DEFAULT_THRESHOLD
    assign_mode: str = "any"  # "any" | "top1"

    _MODE_ALIASES = {"any-above-threshold": "any", "top-1-above-threshold": "top1"}

    def __post_init__(self):
        if not -1.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [-1, 1]")
        self.assign_mode = self._MODE_ALIASES.get(self.assign_mode, self.assign_mode)
        if self.assign_mode not in ("any", "top1"):
            raise ValueError(f"unknown assign_mode {self.assign_mode!r}")


def parse_record(line: str) -> Document:
    """Parse one JSON record line into a Document.

    Raises MalformedRecord for unparseable input and MissingAbstract when the
    abstract is absent or empty after trimming. Unknown fields are ignored;
    absent optional fields stay absent (None / empty list), never "".
    """
    try:
        raw = json.loads(line)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedRecord(f"unparseable record: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedRecord(f"record is not an object: {type(raw).__name__}")
    doc_id = raw.get("id")
    if doc_id is None or str(doc_id).strip() == "":
        raise MalformedRecord("record has no id")

    abstract = raw.get("abstract")
    if abstract is None or not str(abstract).strip():
        raise MissingAbstract(f"record {doc_id!r} has no abstract")

    year = raw.get("year")
    if year is not None:
        try:
            year = int(year)
        except (TypeError, ValueError) as exc:
            raise MalformedRecord(f"record {doc_id!r} has non-integer year {year!r}") from exc

    def _str_list(key: str) -> list[str]:
        val = raw.get(key)
        if val is None:
            return []
        if not isinstance(val, list):
            raise MalformedRecord(f"record {doc_id!r}: field {key!r} is not an array")
        return [str(x) for x in val]

    return Document(
        doc_id=str(doc_id),
        title=str(raw.get("title") or ""),
        abstract=str(abstract).strip(),
        authors=_str_list("authors"),
        year=year,
        doi=raw.get("doi"),
        journal=raw.get("journal"),
        fields_of_study=_str_list("fields_of_study"),
    )


@dataclass
class IngestReport:
    accepted: int = 0
    rejected_by_reason: dict[str, int] = field(default_factory=dict)

    @property
    def rejected(self) -> int:
        return sum(self.rejected_by_reason.values())

    @property
    def total(self) -> int:
        return self.accepted + self.rejected

    def _reject(self, reason: str) -> None:
        self.rejected_by_reason[reason] = self.rejected_by_reason.get(reason, 0) + 1


def ingest(source: Iterable[str], store) -> IngestReport:
    """Parse and index a stream of record lines; first writer wins on ids.

    Idempotent: re-running the same stream rejects everything as Duplicate.
    Blank lines are skipped without counting. `store` is a DocumentIndex (or
    the Store facade, which forwards index_document).
    """
    from .errors import DuplicateDocument  # local to keep import block short

    report = IngestReport()
    for line in source:
        if not line.strip():
            continue
        try:
            doc = parse_record(line)
        except MalformedRecord:
            report._reject("MalformedRecord")
            continue
        except MissingAbstract:
            report._reject("MissingAbstract")
            continue
        if len(doc.abstract) < MIN_ABSTRACT_CHARS:
            report._reject("MissingAbstract")
            continue
        try:
            store.index_document(doc)
        except DuplicateDocument:
            report._reject("Duplicate")
            continue
        report.accepted += 1
    return report


def assign_categories(
    doc_embedding: np.ndarray,
    categories: list[CategoryDef],
    cfg: FilterConfig | None = None,
) -> set[str]:
    """Category ids whose definition embeddings are close enough to the doc.

    "any" mode returns every category with cos >= threshold; "top1" returns
    the argmax category iff it clears the threshold (ties broken by ascending
    category_id). Deterministic.
    """
    cfg = cfg or FilterConfig()
    doc_embedding = np.asarray(doc_embedding, dtype=float).ravel()
    scored: list[tuple[str, float]] = []
    for cat in categories:
        if cat.definition_embedding is None:
            raise DimensionMismatch(f"category {cat.category_id!r} has no embedding")
        emb = np.asarray(cat.definition_embedding, dtype=float).ravel()
        if emb.shape != doc_embedding.shape:
            raise DimensionMismatch(
                f"category {cat.category_id!r} embedding dim {emb.shape[0]} "
                f"!= document dim {doc_embedding.shape[0]}"
            )
        scored.append((cat.category_id, cosine(doc_embedding, emb)))

    if cfg.assign_mode == "top1":
        if not scored:
            return set()
        best_id, best_score = min(scored, key=lambda cs: (-cs[1], cs[0]))
        return {best_id} if best_score >= cfg.threshold else set()
    return {cid for cid, score in scored if score >= cfg.threshold}


def load_categories(path: str | Path | None = None) -> list[CategoryDef]:
    """Load category definitions (bundled file by default); embeddings unset."""
    if path is None:
        text = resources.files("geolit.data").joinpath("categories.jsonl").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    cats: list[CategoryDef] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        cats.append(CategoryDef(raw["category_id"], raw["name"], raw["definition"]))
    ids = [c.category_id for c in cats]
    if len(ids) != len(set(ids)):
        raise MalformedRecord("duplicate category_id in definitions file")
    return cats


def embed_categories(categories: list[CategoryDef], provider) -> list[CategoryDef]:
    """Fill definition embeddings (unit norm) using a fitted baseline model."""
    for cat in categories:
        vec = np.asarray(provider.text_vector(cat.definition), dtype=float).ravel()
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise DimensionMismatch(
                f"category {cat.category_id!r} definition embeds to the zero vector"
            )
        cat.definition_embedding = vec / norm
    return categories

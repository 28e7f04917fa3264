"""Inverted-index document store.

Holds full document payloads plus derived search structures: term postings
over title+abstract tokens, tag postings for facets (``geo:<entry>``,
``category:<id>``, ``group:<id>``, ``topic:<model>/<index>``), and a year
map. All derived structures are rebuilt from the payloads alone on open, so
the WAL only ever carries payload-level mutations.
"""

from __future__ import annotations

import threading
from pathlib import Path

from ..corpus import Document
from ..embed import tokenize
from ..errors import DuplicateDocument, UnknownDocument
from .wal import LogDir


def payload_from_document(doc: Document) -> dict:
    return {
        "id": doc.doc_id,
        "title": doc.title,
        "abstract": doc.abstract,
        "authors": list(doc.authors),
        "year": doc.year,
        "doi": doc.doi,
        "journal": doc.journal,
        "fields_of_study": list(doc.fields_of_study),
        "category_labels": sorted(doc.category_labels),
        "geo_tags": sorted(doc.geo_tags),
        "geo_spans": [],
        "group_ids": sorted(doc.group_ids),
        "topics": {},
    }


def document_from_payload(payload: dict) -> Document:
    return Document(
        doc_id=payload["id"],
        title=payload["title"],
        abstract=payload["abstract"],
        authors=list(payload["authors"]),
        year=payload["year"],
        doi=payload["doi"],
        journal=payload["journal"],
        fields_of_study=list(payload["fields_of_study"]),
        category_labels=set(payload["category_labels"]),
        geo_tags=set(payload["geo_tags"]),
        group_ids=set(payload["group_ids"]),
    )


class DocumentIndex:
    """Single-writer, many-reader document index with WAL durability."""

    def __init__(self, directory: str | Path):
        self._log = LogDir(directory)
        self._lock = threading.RLock()
        self._docs: dict[str, dict] = {}
        self._text: dict[str, set[str]] = {}
        self._tags: dict[str, set[str]] = {}
        self._years: dict[int, set[str]] = {}
        snapshot = self._log.load_snapshot()
        if snapshot:
            self._docs = snapshot["docs"]
        for record in self._log.replay_wal():
            self._apply(record)
        self._rebuild_derived()

    # --- derived structures -------------------------------------------------

    def _rebuild_derived(self) -> None:
        self._text = {}
        self._tags = {}
        self._years = {}
        for payload in self._docs.values():
            self._index_payload(payload)

    def _index_payload(self, payload: dict) -> None:
        doc_id = payload["id"]
        for term in set(tokenize(payload["title"])) | set(tokenize(payload["abstract"])):
            self._text.setdefault(term, set()).add(doc_id)
        for entry_id in payload["geo_tags"]:
            self._tags.setdefault(f"geo:{entry_id}", set()).add(doc_id)
        for cat in payload["category_labels"]:
            self._tags.setdefault(f"category:{cat}", set()).add(doc_id)
        for gid in payload["group_ids"]:
            self._tags.setdefault(f"group:{gid}", set()).add(doc_id)
        for model_id, topic_index in payload["topics"].items():
            self._tags.setdefault(f"topic:{model_id}/{topic_index}", set()).add(doc_id)
        if payload["year"] is not None:
            self._years.setdefault(int(payload["year"]), set()).add(doc_id)

    def _deindex_tags(self, payload: dict) -> None:
        doc_id = payload["id"]
        keys = (
            [f"geo:{e}" for e in payload["geo_tags"]]
            + [f"category:{c}" for c in payload["category_labels"]]
            + [f"group:{g}" for g in payload["group_ids"]]
            + [f"topic:{m}/{i}" for m, i in payload["topics"].items()]
        )
        for key in keys:
            bucket = self._tags.get(key)
            if bucket is not None:
                bucket.discard(doc_id)
                if not bucket:
                    del self._tags[key]

    # --- mutation ops (WAL'd) -------------------------------------------------

    def _apply(self, record: dict) -> None:
        op = record["op"]
        if op == "put":
            self._docs[record["doc"]["id"]] = record["doc"]
        elif op == "geo":
            payload = self._docs[record["id"]]
            payload["geo_tags"] = sorted(record["tags"])
            payload["geo_spans"] = record["spans"]
        elif op == "categories":
            self._docs[record["id"]]["category_labels"] = sorted(record["labels"])
        elif op == "group_add":
            for doc_id in record["ids"]:
                groups = set(self._docs[doc_id]["group_ids"])
                groups.add(record["gid"])
                self._docs[doc_id]["group_ids"] = sorted(groups)
        elif op == "group_remove":
            for doc_id in record["ids"]:
                groups = set(self._docs[doc_id]["group_ids"])
                groups.discard(record["gid"])
                self._docs[doc_id]["group_ids"] = sorted(groups)
        elif op == "topics_set":
            for doc_id, topic_index in record["assign"].items():
                self._docs[doc_id]["topics"][record["model"]] = int(topic_index)
        elif op == "topics_remove":
            for payload in self._docs.values():
                payload["topics"].pop(record["model"], None)
        else:
            raise ValueError(f"unknown WAL op {op!r}")

    def _commit(self, record: dict) -> None:
        self._log.append(record)
        self._apply(record)

    def index_document(self, doc: Document) -> None:
        with self._lock:
            if doc.doc_id in self._docs:
                raise DuplicateDocument(f"document {doc.doc_id!r} already indexed")
            payload = payload_from_document(doc)
            self._commit({"op": "put", "doc": payload})
            self._index_payload(payload)

    def set_geo_tags(self, doc_id: str, entry_ids: set[str], spans: list[dict]) -> None:
        with self._lock:
            payload = self._require(doc_id)
            self._deindex_tags(payload)
            self._commit({"op": "geo", "id": doc_id, "tags": sorted(entry_ids), "spans": spans})
            self._index_payload(payload)

    def set_categories(self, doc_id: str, labels: set[str]) -> None:
        with self._lock:
            payload = self._require(doc_id)
            self._deindex_tags(payload)
            self._commit({"op": "categories", "id": doc_id, "labels": sorted(labels)})
            self._index_payload(payload)

    def add_to_group(self, group_id: str, doc_ids: list[str]) -> None:
        with self._lock:
            for doc_id in doc_ids:
                self._require(doc_id)
            self._commit({"op": "group_add", "gid": group_id, "ids": sorted(doc_ids)})
            for doc_id in doc_ids:
                self._tags.setdefault(f"group:{group_id}", set()).add(doc_id)

    def remove_group(self, group_id: str) -> None:
        with self._lock:
            member_ids = sorted(self._tags.get(f"group:{group_id}", ()))
            if member_ids:
                self._commit({"op": "group_remove", "gid": group_id, "ids": member_ids})
            self._tags.pop(f"group:{group_id}", None)

    def set_topic_assignments(self, model_id: str, assignments: dict[str, int]) -> None:
        """Record per-document topic membership; noise (-1) is not stored."""
        with self._lock:
            kept = {d: i for d, i in assignments.items() if i >= 0}
            for doc_id in kept:
                self._require(doc_id)
            self._commit({"op": "topics_set", "model": model_id, "assign": kept})
            for doc_id, topic_index in kept.items():
                self._tags.setdefault(f"topic:{model_id}/{topic_index}", set()).add(doc_id)

    def remove_topic_assignments(self, model_id: str) -> None:
        with self._lock:
            self._commit({"op": "topics_remove", "model": model_id})
            for key in [k for k in self._tags if k.startswith(f"topic:{model_id}/")]:
                del self._tags[key]

    # --- reads -----------------------------------------------------------------

    def _require(self, doc_id: str) -> dict:
        payload = self._docs.get(doc_id)
        if payload is None:
            raise UnknownDocument(f"no document {doc_id!r}")
        return payload

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def __len__(self) -> int:
        return len(self._docs)

    def get(self, doc_id: str) -> Document:
        with self._lock:
            return document_from_payload(self._require(doc_id))

    def get_payload(self, doc_id: str) -> dict:
        with self._lock:
            return dict(self._require(doc_id))

    def doc_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._docs)

    def text_postings(self, term: str) -> list[str]:
        with self._lock:
            return sorted(self._text.get(term, ()))

    def tag_postings(self, key: str) -> list[str]:
        with self._lock:
            return sorted(self._tags.get(key, ()))

    def tag_keys(self, prefix: str) -> list[str]:
        with self._lock:
            return sorted(k for k in self._tags if k.startswith(prefix))

    def year_postings(self, lo: int, hi: int) -> list[str]:
        with self._lock:
            out: set[str] = set()
            for year, ids in self._years.items():
                if lo <= year <= hi:
                    out |= ids
            return sorted(out)

    # --- maintenance -------------------------------------------------------------

    def verify(self) -> list[str]:
        """Consistency sweep: derived structures must match the payloads."""
        problems: list[str] = []
        with self._lock:
            live_text, live_tags, live_years = self._text, self._tags, self._years
            self._text, self._tags, self._years = {}, {}, {}
            try:
                self._rebuild_derived()
                if live_text != self._text:
                    problems.append("text postings disagree with payload-derived rebuild")
                if live_tags != self._tags:
                    problems.append("tag postings disagree with payload-derived rebuild")
                if live_years != self._years:
                    problems.append("year map disagrees with payload-derived rebuild")
            finally:
                self._text, self._tags, self._years = live_text, live_tags, live_years
            for key, bucket in self._tags.items():
                for doc_id in bucket:
                    if doc_id not in self._docs:
                        problems.append(f"posting {key} references missing document {doc_id}")
        return problems

    def compact(self) -> None:
        with self._lock:
            self._log.write_snapshot({"docs": self._docs})

    def close(self) -> None:
        with self._lock:
            self._log.close()

"""Embedded persistence: a document index plus a metadata store.

The two-store split mirrors the architecture the engine replaces: derived
document-level data (full text, tag postings) in one store, small relational
metadata (groups, topic models, jobs, geographic entities) in the other.
Both live under one data directory and share WAL + snapshot durability.
"""

from __future__ import annotations

from pathlib import Path

from ..corpus import Document
from ..errors import DuplicateName, UnknownDocument
from ..geotag import Gazetteer, GeoTag
from ..topics.model import ModelConfig, Topic, TopicModel
from .index import DocumentIndex
from .metadata import MetadataStore
from .query import Query, execute, parse_query

__all__ = [
    "DocumentIndex",
    "MetadataStore",
    "Store",
    "Query",
    "execute",
    "parse_query",
]


class Store:
    """Facade over the document index and the metadata store."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.index = DocumentIndex(self.data_dir / "index")
        self.meta = MetadataStore(self.data_dir / "meta")

    @classmethod
    def open(cls, data_dir: str | Path) -> "Store":
        return cls(data_dir)

    def close(self) -> None:
        self.index.close()
        self.meta.close()

    def compact(self) -> None:
        self.index.compact()
        self.meta.compact()

    # --- documents --------------------------------------------------------

    def index_document(self, doc: Document) -> None:
        self.index.index_document(doc)

    def get_document(self, doc_id: str) -> Document:
        return self.index.get(doc_id)

    def doc_ids(self) -> list[str]:
        return self.index.doc_ids()

    def __len__(self) -> int:
        return len(self.index)

    def apply_geo_tags(self, doc_id: str, tags: list[GeoTag], gazetteer: Gazetteer) -> None:
        """Write a document's resolved tags and register the entities' metadata."""
        spans = [
            {
                "entry_id": t.entry_id,
                "surface": t.surface,
                "start": t.start,
                "end": t.end,
                "confidence": t.confidence,
            }
            for t in sorted(tags, key=lambda t: (t.start, t.end))
        ]
        entry_ids = {t.entry_id for t in tags}
        self.index.set_geo_tags(doc_id, entry_ids, spans)
        rows = {}
        for entry_id in sorted(entry_ids):
            entry = gazetteer.entries[entry_id]
            rows[entry_id] = {"kind": entry.kind, "name": entry.canonical_name}
        if rows:
            self.meta.upsert_geo_entities(rows)

    # --- queries ------------------------------------------------------------

    def execute(self, query: Query | str) -> tuple[list[str], int]:
        return execute(query, self.index, self.meta)

    # --- groups ----------------------------------------------------------------

    def create_group(self, name: str, doc_ids: list[str]) -> str:
        """Persist a named document set; postings first, metadata row last."""
        for doc_id in doc_ids:
            if doc_id not in self.index:
                raise UnknownDocument(f"no document {doc_id!r}")
        for row in self.meta.groups.values():
            if row["name"] == name and not row.get("deleted"):
                raise DuplicateName(f"group named {name!r} already exists")
        group_id = self.meta.next_id("group", "g")
        unique_ids = sorted(set(doc_ids))
        self.index.add_to_group(group_id, unique_ids)
        self.meta.create_group_row(group_id, name, len(unique_ids))
        return group_id

    def list_groups(self) -> list[dict]:
        return self.meta.live_groups()

    def get_group_docs(self, group_id: str) -> list[str]:
        self.meta.require_group(group_id)
        return self.index.tag_postings(f"group:{group_id}")

    def delete_group(self, group_id: str) -> None:
        self.meta.delete_group_row(group_id)
        self.index.remove_group(group_id)

    def create_group_set(self, name: str, group_ids: list[str]) -> str:
        """A named collection of existing groups."""
        for gid in group_ids:
            self.meta.require_group(gid)
        group_set_id = self.meta.next_id("group_set", "gs")
        self.meta.create_group_set_row(group_set_id, name, group_ids)
        return group_set_id

    def list_group_sets(self) -> list[dict]:
        return self.meta.live_group_sets()

    # --- topic models ---------------------------------------------------------------

    def persist_topic_model(self, model: TopicModel) -> None:
        """Metadata rows + per-document assignment postings."""
        row = {
            "model_id": model.model_id,
            "name": model.name,
            "status": "completed",
            "config": model.config.to_dict(),
            "seed": model.seed,
            "doc_ids": list(model.doc_ids),
            "deleted": False,
            "topics": [
                {
                    "topic_index": t.topic_index,
                    "term_scores": {k: t.term_scores[k] for k in sorted(t.term_scores)},
                    "top_terms": list(t.top_terms),
                    "representative_doc_ids": list(t.representative_doc_ids),
                    "member_count": t.member_count,
                    "summary": t.summary,
                }
                for t in model.topics
            ],
        }
        assignments = {
            doc_id: a for doc_id, a in zip(model.doc_ids, model.assignments)
        }
        self.index.remove_topic_assignments(model.model_id)
        self.index.set_topic_assignments(model.model_id, assignments)
        self.meta.put_model_row(row)

    def load_topic_model(self, model_id: str) -> TopicModel:
        """Rebuild the model from metadata rows plus assignment postings."""
        row = self.meta.require_model(model_id)
        assign_by_doc: dict[str, int] = {}
        for key in self.index.tag_keys(f"topic:{model_id}/"):
            topic_index = int(key.rsplit("/", 1)[1])
            for doc_id in self.index.tag_postings(key):
                assign_by_doc[doc_id] = topic_index
        return TopicModel(
            model_id=row["model_id"],
            name=row["name"],
            doc_ids=list(row["doc_ids"]),
            assignments=[assign_by_doc.get(d, -1) for d in row["doc_ids"]],
            topics=[
                Topic(
                    topic_index=t["topic_index"],
                    term_scores={k: float(v) for k, v in t["term_scores"].items()},
                    top_terms=list(t["top_terms"]),
                    representative_doc_ids=list(t["representative_doc_ids"]),
                    member_count=t["member_count"],
                    summary=t.get("summary"),
                )
                for t in row["topics"]
            ],
            config=ModelConfig.from_dict(row["config"]),
            seed=row["seed"],
        )

    def list_topic_models(self) -> list[dict]:
        return self.meta.live_models()

    def delete_topic_model(self, model_id: str) -> None:
        self.meta.delete_model_row(model_id)
        self.index.remove_topic_assignments(model_id)

    # --- portability -----------------------------------------------------------------

    def export_jsonl(self, path: str | Path) -> int:
        """Dump every document payload (including tags) as JSON Lines."""
        import json

        count = 0
        with open(path, "w", encoding="utf-8") as fh:
            for doc_id in self.index.doc_ids():
                fh.write(json.dumps(
                    self.index.get_payload(doc_id), ensure_ascii=False, sort_keys=True
                ) + "\n")
                count += 1
        return count

    def import_jsonl(self, path: str | Path, gazetteer: Gazetteer | None = None) -> int:
        """Load payloads produced by export_jsonl; existing ids are skipped.

        Documents and their geo tags port over (a gazetteer is needed to
        re-register the entities); group memberships and topic assignments are
        metadata-coupled and do not travel — re-create groups and re-run fits
        against the new store.
        """
        import json

        from .index import document_from_payload

        count = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                payload = json.loads(line)
                if payload["id"] in self.index:
                    continue
                doc = document_from_payload(payload)
                doc.group_ids = set()
                geo_spans = payload.get("geo_spans", [])
                self.index.index_document(doc)
                if doc.geo_tags:
                    if gazetteer is None:
                        raise ValueError("importing geo-tagged documents needs a gazetteer")
                    self.index.set_geo_tags(doc.doc_id, doc.geo_tags, geo_spans)
                    self.meta.upsert_geo_entities({
                        entry_id: {
                            "kind": gazetteer.entries[entry_id].kind,
                            "name": gazetteer.entries[entry_id].canonical_name,
                        }
                        for entry_id in sorted(doc.geo_tags)
                    })
                count += 1
        return count

    # --- consistency ----------------------------------------------------------------------

    def verify(self) -> list[str]:
        """Consistency sweep across both stores; empty list means healthy."""
        problems = self.index.verify()
        for row in self.meta.live_groups():
            postings = self.index.tag_postings(f"group:{row['group_id']}")
            if len(postings) != row["member_count"]:
                problems.append(
                    f"group {row['group_id']} member_count={row['member_count']} "
                    f"but {len(postings)} postings"
                )
        known_models = {m["model_id"] for m in self.meta.live_models()}
        for key in self.index.tag_keys("topic:"):
            model_id = key[len("topic:"):].rsplit("/", 1)[0]
            if model_id not in known_models:
                problems.append(f"postings for unknown topic model {model_id}")
        for key in self.index.tag_keys("geo:"):
            entry_id = key[len("geo:"):]
            if entry_id not in self.meta.geo_entities:
                problems.append(f"geo postings for unregistered entity {entry_id}")
        return problems

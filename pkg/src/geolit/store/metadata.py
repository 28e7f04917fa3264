"""Small relational metadata: groups, group sets, topic models, jobs, places.

The counterpart of the document index: a handful of rows per user action
rather than per document. A topic model lands here as one model row plus one
row per topic (top terms, scores, representatives); the per-document
assignments live as postings in the document index.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone
from pathlib import Path

from ..errors import DuplicateName, UnknownGroup, UnknownModel
from .wal import LogDir


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class MetadataStore:
    def __init__(self, directory: str | Path):
        self._log = LogDir(directory)
        self._lock = threading.RLock()
        self.groups: dict[str, dict] = {}
        self.group_sets: dict[str, dict] = {}
        self.topic_models: dict[str, dict] = {}
        self.jobs: dict[str, dict] = {}
        self.geo_entities: dict[str, dict] = {}
        self._counters: dict[str, int] = {}
        snapshot = self._log.load_snapshot()
        if snapshot:
            self.groups = snapshot["groups"]
            self.group_sets = snapshot["group_sets"]
            self.topic_models = snapshot["topic_models"]
            self.jobs = snapshot["jobs"]
            self.geo_entities = snapshot["geo_entities"]
            self._counters = snapshot["counters"]
        for record in self._log.replay_wal():
            self._apply(record)

    def _apply(self, record: dict) -> None:
        op = record["op"]
        if op == "counter":
            self._counters[record["kind"]] = record["value"]
        elif op == "group_put":
            self.groups[record["row"]["group_id"]] = record["row"]
        elif op == "group_delete":
            row = self.groups.get(record["id"])
            if row is not None:
                row["deleted"] = True
        elif op == "group_set_put":
            self.group_sets[record["row"]["group_set_id"]] = record["row"]
        elif op == "model_put":
            self.topic_models[record["row"]["model_id"]] = record["row"]
        elif op == "model_status":
            self.topic_models[record["id"]]["status"] = record["status"]
        elif op == "model_summary":
            row = self.topic_models[record["id"]]
            for topic in row["topics"]:
                if topic["topic_index"] == record["topic_index"]:
                    topic["summary"] = record["summary"]
        elif op == "model_delete":
            row = self.topic_models.get(record["id"])
            if row is not None:
                row["deleted"] = True
        elif op == "job_put":
            self.jobs[record["row"]["job_id"]] = record["row"]
        elif op == "job_update":
            self.jobs[record["id"]].update(record["fields"])
        elif op == "geo_entities":
            self.geo_entities.update(record["rows"])
        else:
            raise ValueError(f"unknown WAL op {op!r}")

    def _commit(self, record: dict) -> None:
        self._log.append(record)
        self._apply(record)

    def next_id(self, kind: str, prefix: str) -> str:
        with self._lock:
            value = self._counters.get(kind, 0) + 1
            self._commit({"op": "counter", "kind": kind, "value": value})
            return f"{prefix}{value}"

    # --- groups -------------------------------------------------------------

    def live_groups(self) -> list[dict]:
        with self._lock:
            return sorted(
                (dict(g) for g in self.groups.values() if not g.get("deleted")),
                key=lambda g: g["group_id"],
            )

    def create_group_row(self, group_id: str, name: str, member_count: int) -> dict:
        with self._lock:
            for row in self.groups.values():
                if row["name"] == name and not row.get("deleted"):
                    raise DuplicateName(f"group named {name!r} already exists")
            row = {
                "group_id": group_id,
                "name": name,
                "member_count": member_count,
                "created_at": _now(),
                "deleted": False,
            }
            self._commit({"op": "group_put", "row": row})
            return row

    def require_group(self, group_id: str) -> dict:
        row = self.groups.get(group_id)
        if row is None or row.get("deleted"):
            raise UnknownGroup(f"no group {group_id!r}")
        return row

    def delete_group_row(self, group_id: str) -> None:
        with self._lock:
            self.require_group(group_id)
            self._commit({"op": "group_delete", "id": group_id})

    def group_name_to_id(self, name: str) -> str | None:
        with self._lock:
            hits = [
                gid for gid, row in self.groups.items()
                if row["name"].lower() == name.lower() and not row.get("deleted")
            ]
            return hits[0] if len(hits) == 1 else None

    # --- group sets -----------------------------------------------------------

    def create_group_set_row(self, group_set_id: str, name: str, group_ids: list[str]) -> dict:
        with self._lock:
            for row in self.group_sets.values():
                if row["name"] == name:
                    raise DuplicateName(f"group set named {name!r} already exists")
            row = {
                "group_set_id": group_set_id,
                "name": name,
                "group_ids": list(group_ids),
                "created_at": _now(),
            }
            self._commit({"op": "group_set_put", "row": row})
            return row

    def live_group_sets(self) -> list[dict]:
        with self._lock:
            return sorted(
                (dict(g) for g in self.group_sets.values()),
                key=lambda g: g["group_set_id"],
            )

    # --- topic models ---------------------------------------------------------

    def put_model_row(self, row: dict) -> None:
        with self._lock:
            self._commit({"op": "model_put", "row": row})

    def set_model_status(self, model_id: str, status: str) -> None:
        with self._lock:
            self.require_model(model_id)
            self._commit({"op": "model_status", "id": model_id, "status": status})

    def set_topic_summary(self, model_id: str, topic_index: int, summary: str) -> None:
        with self._lock:
            self.require_model(model_id)
            self._commit({
                "op": "model_summary", "id": model_id,
                "topic_index": topic_index, "summary": summary,
            })

    def require_model(self, model_id: str) -> dict:
        row = self.topic_models.get(model_id)
        if row is None or row.get("deleted"):
            raise UnknownModel(f"no topic model {model_id!r}")
        return row

    def live_models(self) -> list[dict]:
        with self._lock:
            return sorted(
                (dict(m) for m in self.topic_models.values() if not m.get("deleted")),
                key=lambda m: m["model_id"],
            )

    def delete_model_row(self, model_id: str) -> None:
        with self._lock:
            self.require_model(model_id)
            self._commit({"op": "model_delete", "id": model_id})

    # --- jobs --------------------------------------------------------------------

    def put_job(self, row: dict) -> None:
        with self._lock:
            self._commit({"op": "job_put", "row": row})

    def update_job(self, job_id: str, **fields) -> None:
        with self._lock:
            self._commit({"op": "job_update", "id": job_id, "fields": fields})

    def get_job(self, job_id: str) -> dict | None:
        with self._lock:
            row = self.jobs.get(job_id)
            return dict(row) if row else None

    # --- geographic entities --------------------------------------------------------

    def upsert_geo_entities(self, rows: dict[str, dict]) -> None:
        with self._lock:
            fresh = {k: v for k, v in rows.items() if self.geo_entities.get(k) != v}
            if fresh:
                self._commit({"op": "geo_entities", "rows": fresh})

    def geo_name_to_id(self, name: str) -> str | None:
        with self._lock:
            hits = [
                eid for eid, row in self.geo_entities.items()
                if row["name"].lower() == name.lower()
            ]
            return hits[0] if len(hits) == 1 else None

    # --- maintenance -----------------------------------------------------------------

    def compact(self) -> None:
        with self._lock:
            self._log.write_snapshot({
                "groups": self.groups,
                "group_sets": self.group_sets,
                "topic_models": self.topic_models,
                "jobs": self.jobs,
                "geo_entities": self.geo_entities,
                "counters": self._counters,
            })

    def close(self) -> None:
        with self._lock:
            self._log.close()

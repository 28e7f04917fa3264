"""Location-frequency statistics and chart-ready exports.

Counting is abstract-level: a document mentioning a place five times counts
once for that place. relative_frequency is doc_count / total_docs exactly
(0 when the scope is empty). Choropleth values use log10(doc_count + 1) so
zero-count regions stay finite.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

from .errors import UnknownGroup, WrongKind

KINDS = ("country", "state", "city")


@dataclass
class FrequencyRow:
    entry_id: str
    canonical_name: str
    doc_count: int
    relative_frequency: float


@dataclass
class FrequencyTable:
    scope: str            # human-readable scope descriptor
    kind: str             # country | state | city
    rows: list[FrequencyRow] = field(default_factory=list)
    total_docs: int = 0


def mention_counts(store, kind: str, scope: str | None = None) -> FrequencyTable:
    """Documents per geographic entity of `kind`, optionally query-scoped.

    doc_count counts documents carrying at least one tag for the entity;
    total_docs is the scope size. Rows sort by doc_count descending, name
    ascending on ties.
    """
    if kind not in KINDS:
        raise WrongKind(f"kind must be one of {KINDS}, got {kind!r}")
    if scope is None:
        scope_ids = set(store.doc_ids())
        scope_label = "all"
    else:
        ids, _ = store.execute(scope)
        scope_ids = set(ids)
        scope_label = scope

    total = len(scope_ids)
    rows: list[FrequencyRow] = []
    for key in store.index.tag_keys("geo:"):
        entry_id = key[len("geo:"):]
        entity = store.meta.geo_entities.get(entry_id)
        if entity is None or entity["kind"] != kind:
            continue
        count = len(set(store.index.tag_postings(key)) & scope_ids)
        if count == 0:
            continue
        rows.append(FrequencyRow(
            entry_id=entry_id,
            canonical_name=entity["name"],
            doc_count=count,
            relative_frequency=(count / total) if total else 0.0,
        ))
    rows.sort(key=lambda r: (-r.doc_count, r.canonical_name))
    return FrequencyTable(scope=scope_label, kind=kind, rows=rows, total_docs=total)


def top_n(table: FrequencyTable, n: int) -> FrequencyTable:
    """First n rows of the (already sorted) table."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return FrequencyTable(
        scope=table.scope, kind=table.kind, rows=table.rows[:n], total_docs=table.total_docs
    )


def choropleth_export(table: FrequencyTable) -> list[dict]:
    """Per-country map rows {country_code, doc_count, log_value}."""
    if table.kind != "country":
        raise WrongKind(f"choropleth needs a country table, got kind={table.kind!r}")
    return [
        {
            "country_code": row.entry_id,
            "doc_count": row.doc_count,
            "log_value": math.log10(row.doc_count + 1),
        }
        for row in table.rows
    ]


def group_intersections(store, group_ids: list[str]) -> list[list[int]]:
    """Symmetric matrix of pairwise document-set intersection sizes."""
    member_sets: list[set[str]] = []
    for gid in group_ids:
        try:
            members = set(store.get_group_docs(gid))
        except UnknownGroup:
            raise
        member_sets.append(members)
    k = len(member_sets)
    matrix = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            shared = len(member_sets[i] & member_sets[j])
            matrix[i][j] = shared
            matrix[j][i] = shared
    return matrix


def to_csv(table: FrequencyTable) -> str:
    """CSV export with the documented columns name,count,relative_frequency."""
    buf = io.StringIO()
    buf.write("name,count,relative_frequency\n")
    for row in table.rows:
        name = row.canonical_name
        if "," in name or '"' in name:
            name = '"' + name.replace('"', '""') + '"'
        buf.write(f"{name},{row.doc_count},{row.relative_frequency}\n")
    return buf.getvalue()


def chart_payload(table: FrequencyTable) -> dict:
    """Chart-data structure consumed by the web UI."""
    return {
        "labels": [r.canonical_name for r in table.rows],
        "counts": [r.doc_count for r in table.rows],
        "log_values": [math.log10(r.doc_count + 1) for r in table.rows],
        "iso_codes": [r.entry_id for r in table.rows],
    }

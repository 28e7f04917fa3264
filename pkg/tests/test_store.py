from __future__ import annotations

import json

import numpy as np
import pytest

from geolit.corpus import Document, ingest
from geolit.errors import (
    DuplicateDocument,
    DuplicateName,
    QuerySyntaxError,
    UnknownDocument,
    UnknownField,
    UnknownGroup,
    UnknownModel,
)
from geolit.store import Store
from geolit.store.query import And, Atom, Not, Or, Phrase, execute, parse_query
from geolit.store.wal import LogDir
from geolit.topics.model import ModelConfig, Topic, TopicModel
from conftest import record_line
from oracles import brute_force_execute


def _doc(doc_id: str, abstract: str, title: str = "t", year: int | None = 2020) -> Document:
    return Document(doc_id=doc_id, title=title, abstract=abstract, year=year)


class TestWal:
    def test_append_replay(self, tmp_path):
        log = LogDir(tmp_path / "s")
        log.append({"op": "a", "n": 1})
        log.append({"op": "b", "n": 2})
        log.close()
        assert LogDir(tmp_path / "s").replay_wal() == [{"op": "a", "n": 1}, {"op": "b", "n": 2}]

    def test_torn_tail_discarded(self, tmp_path):
        log = LogDir(tmp_path / "s")
        log.append({"op": "a"})
        log.append({"op": "b"})
        log.close()
        wal = tmp_path / "s" / "wal.log"
        data = wal.read_bytes()
        wal.write_bytes(data[:-7])  # cut into the last record
        records = LogDir(tmp_path / "s").replay_wal()
        assert records == [{"op": "a"}]
        # the torn bytes are gone after replay
        assert wal.read_bytes().count(b"\n") == 1

    def test_corrupt_line_stops_replay(self, tmp_path):
        log = LogDir(tmp_path / "s")
        log.append({"op": "a"})
        log.close()
        wal = tmp_path / "s" / "wal.log"
        with open(wal, "ab") as fh:
            fh.write(b"deadbeef {\"op\": \"evil\"}\n")  # wrong crc
        assert LogDir(tmp_path / "s").replay_wal() == [{"op": "a"}]

    def test_snapshot_roundtrip_and_magic(self, tmp_path):
        log = LogDir(tmp_path / "s")
        log.write_snapshot({"x": [1, 2, 3]})
        seg = next((tmp_path / "s").glob("segment-*.gce"))
        assert seg.read_text().startswith("GCE1")
        assert LogDir(tmp_path / "s").load_snapshot() == {"x": [1, 2, 3]}

    def test_wal_truncated_after_snapshot(self, tmp_path):
        log = LogDir(tmp_path / "s")
        log.append({"op": "a"})
        log.write_snapshot({"state": 1})
        assert log.replay_wal() == []


class TestDocumentIndex:
    def test_index_and_text_query(self, store):
        store.index_document(_doc("d1", "flood risk rises"))
        ids, total = store.execute("text:flood")
        assert ids == ["d1"] and total == 1

    def test_payload_roundtrip(self, store):
        doc = Document(
            doc_id="d1", title="T", abstract="Long enough abstract here.",
            authors=["A"], year=1999, doi="10/x", journal="J",
            fields_of_study=["Geo"], category_labels={"flood"},
        )
        store.index_document(doc)
        got = store.get_document("d1")
        assert got == doc

    def test_duplicate_rejected(self, store):
        store.index_document(_doc("d1", "abstract text one"))
        with pytest.raises(DuplicateDocument):
            store.index_document(_doc("d1", "abstract text two"))

    def test_reopen_preserves_everything(self, tmp_path):
        s = Store.open(tmp_path / "d")
        s.index_document(_doc("d1", "permafrost thaw subsides"))
        s.index_document(_doc("d2", "wildfire smoke plume"))
        s.close()
        s2 = Store.open(tmp_path / "d")
        assert s2.doc_ids() == ["d1", "d2"]
        assert s2.execute("permafrost")[0] == ["d1"]
        s2.close()

    def test_compact_then_reopen(self, tmp_path):
        s = Store.open(tmp_path / "d")
        for i in range(5):
            s.index_document(_doc(f"d{i}", f"abstract number {i} talks about heat"))
        s.compact()
        s.index_document(_doc("after", "post compaction drought record"))
        s.close()
        s2 = Store.open(tmp_path / "d")
        assert len(s2) == 6
        assert s2.execute("drought")[0] == ["after"]
        assert s2.verify() == []
        s2.close()

    def test_rebuild_equivalence(self, store):
        for i in range(20):
            store.index_document(_doc(f"d{i}", f"theme {'flood' if i % 2 else 'fire'} study {i}"))
        live_text = {t: store.index.text_postings(t) for t in ("flood", "fire", "study")}
        store.index._rebuild_derived()
        for term, postings in live_text.items():
            assert store.index.text_postings(term) == postings

    def test_verify_detects_tampering(self, store):
        store.index_document(_doc("d1", "flood plain mapping"))
        store.index._text.setdefault("bogusterm", set()).add("d1")
        assert store.index.verify() != []


class TestQueryParser:
    def test_field_and_bare_term(self):
        node = parse_query("geo:US AND drought")
        assert node == And((Atom("geo", "US"), Atom("text", "drought")))

    def test_precedence_and_binds_tighter(self):
        node = parse_query("a OR b AND c")
        assert node == Or((Atom("text", "a"), And((Atom("text", "b"), Atom("text", "c")))))

    def test_double_keyword_is_error(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("AND AND")

    def test_error_carries_position(self):
        with pytest.raises(QuerySyntaxError) as err:
            parse_query("a AND (b OR c")
        assert err.value.position == 6

    def test_not_and_parens(self):
        node = parse_query("NOT (a OR b)")
        assert node == Not(Or((Atom("text", "a"), Atom("text", "b"))))

    def test_keywords_case_insensitive(self):
        assert parse_query("a and b") == parse_query("a AND b")

    def test_phrase(self):
        assert parse_query('"sea level rise"') == Phrase("sea level rise")

    def test_unterminated_phrase(self):
        with pytest.raises(QuerySyntaxError):
            parse_query('"sea level')

    def test_empty_query(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("   ")

    def test_year_value_validated(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("year:abc")


class TestExecute:
    def _seed(self, store):
        gaz_rows = {
            "CA": {"kind": "country", "name": "Canada"},
            "US": {"kind": "country", "name": "United States"},
        }
        store.meta.upsert_geo_entities(gaz_rows)
        docs = [
            _doc("d1", "drought hits canada prairie wheat", year=2019),
            _doc("d2", "flood in coastal towns", year=2020),
            _doc("d3", "drought and flood cycles", year=2021),
        ]
        for d in docs:
            store.index_document(d)
        store.index.set_geo_tags("d1", {"CA"}, [])
        store.index.set_geo_tags("d3", {"CA", "US"}, [])

    def test_geo_by_id_and_name(self, store):
        self._seed(store)
        assert store.execute("geo:CA")[0] == ["d1", "d3"]
        assert store.execute("geo:Canada")[0] == ["d1", "d3"]

    def test_not_complement(self, store):
        self._seed(store)
        ids, total = store.execute("NOT drought")
        assert ids == ["d2"] and total == 1

    def test_and_of_disjoint_is_empty(self, store):
        self._seed(store)
        assert store.execute("flood AND wheat") == ([], 0)

    def test_year_range(self, store):
        self._seed(store)
        assert store.execute("year:2020-2021")[0] == ["d2", "d3"]
        assert store.execute("year:2019")[0] == ["d1"]

    def test_unknown_field(self, store):
        self._seed(store)
        with pytest.raises(UnknownField):
            store.execute("author:smith")

    def test_unknown_geo_name_empty(self, store):
        self._seed(store)
        assert store.execute("geo:Nowhereland") == ([], 0)

    def test_phrase_requires_adjacency(self, store):
        store.index_document(_doc("d1", "sea level rise accelerates"))
        store.index_document(_doc("d2", "sea surface level rise"))
        assert store.execute('"sea level"')[0] == ["d1"]
        assert store.execute("sea AND level")[0] == ["d1", "d2"]

    def test_matches_brute_force_randomized(self, store):
        rng = np.random.default_rng(5)
        terms = ["flood", "fire", "heat", "ice", "storm", "rain"]
        docs = []
        for i in range(60):
            words = rng.choice(terms, size=6, replace=True)
            doc = _doc(f"d{i:02d}", " ".join(words), year=int(rng.integers(2000, 2023)))
            docs.append(doc)
            store.index_document(doc)
        for i, doc in enumerate(docs):
            if i % 3 == 0:
                store.index.set_geo_tags(doc.doc_id, {"CA"}, [])
        payloads = {i: store.index.get_payload(i) for i in store.doc_ids()}
        queries = [
            "flood", "flood AND fire", "flood OR fire AND heat", "NOT flood",
            "geo:CA AND NOT storm", '"flood fire"', "year:2005-2015 AND rain",
            "(flood OR fire) AND (heat OR ice)", "NOT (flood OR fire OR heat)",
        ]
        for q in queries:
            node = parse_query(q)
            mine, total = store.execute(node)
            assert mine == brute_force_execute(node, payloads), q
            assert total == len(mine)


class TestGroups:
    def test_create_and_fetch(self, store):
        for i in range(3):
            store.index_document(_doc(f"d{i}", f"wildfire study number {i}"))
        gid = store.create_group("wildfire-CA", ["d0", "d1", "d2"])
        rows = store.list_groups()
        assert rows[0]["name"] == "wildfire-CA"
        assert rows[0]["member_count"] == 3
        assert store.get_group_docs(gid) == ["d0", "d1", "d2"]

    def test_unknown_document(self, store):
        with pytest.raises(UnknownDocument):
            store.create_group("g", ["nope"])

    def test_duplicate_name(self, store):
        store.index_document(_doc("d1", "flood analysis paper"))
        store.create_group("g", ["d1"])
        with pytest.raises(DuplicateName):
            store.create_group("g", ["d1"])

    def test_group_query_atom(self, store):
        store.index_document(_doc("d1", "flood analysis paper"))
        store.index_document(_doc("d2", "another flood paper"))
        gid = store.create_group("floods", ["d1"])
        assert store.execute(f"group:{gid}")[0] == ["d1"]
        assert store.execute("group:floods")[0] == ["d1"]

    def test_soft_delete_cleans_postings(self, store):
        store.index_document(_doc("d1", "flood analysis paper"))
        gid = store.create_group("floods", ["d1"])
        store.delete_group(gid)
        assert store.execute(f"group:{gid}") == ([], 0)
        with pytest.raises(UnknownGroup):
            store.get_group_docs(gid)
        assert store.verify() == []


def _tiny_model(doc_ids: list[str]) -> TopicModel:
    k = len(doc_ids)
    assignments = [0 if i < k // 2 else 1 for i in range(k)]
    assignments[-1] = -1
    return TopicModel(
        model_id="m1",
        name="tiny",
        doc_ids=doc_ids,
        assignments=assignments,
        topics=[
            Topic(0, {"flood": 1.5, "river": 0.5}, ["flood", "river"], doc_ids[:1], k // 2),
            Topic(1, {"fire": 2.0}, ["fire"], doc_ids[k // 2 : k // 2 + 1], k - k // 2 - 1),
        ],
        config=ModelConfig(min_cluster_size=2),
        seed=42,
    )


class TestTopicModelPersistence:
    def test_roundtrip_equality(self, store):
        ids = []
        for i in range(6):
            store.index_document(_doc(f"d{i}", f"abstract {i} flood fire"))
            ids.append(f"d{i}")
        model = _tiny_model(ids)
        store.persist_topic_model(model)
        loaded = store.load_topic_model("m1")
        assert loaded == model

    def test_topic_postings_queryable(self, store):
        ids = []
        for i in range(6):
            store.index_document(_doc(f"d{i}", f"abstract {i} flood fire"))
            ids.append(f"d{i}")
        store.persist_topic_model(_tiny_model(ids))
        hits, _ = store.execute("topic:m1/0")
        assert hits == ids[:3]

    def test_metadata_rows_independent_of_corpus_size(self, tmp_path):
        # the metadata side stores one model row + per-topic rows,
        # regardless of how many documents the model covers
        sizes = {}
        for n in (6, 60):
            s = Store.open(tmp_path / f"d{n}")
            ids = []
            for i in range(n):
                s.index_document(_doc(f"d{i}", f"abstract {i} flood fire"))
                ids.append(f"d{i}")
            model = _tiny_model(ids)
            s.persist_topic_model(model)
            row = s.meta.require_model("m1")
            sizes[n] = 1 + len(row["topics"])
            s.close()
        assert sizes[6] == sizes[60] == 3

    def test_unknown_model(self, store):
        with pytest.raises(UnknownModel):
            store.load_topic_model("missing")

    def test_delete_model_cleans_postings(self, store):
        ids = []
        for i in range(6):
            store.index_document(_doc(f"d{i}", f"abstract {i} flood fire"))
            ids.append(f"d{i}")
        store.persist_topic_model(_tiny_model(ids))
        store.delete_topic_model("m1")
        assert store.execute("topic:m1/0") == ([], 0)
        assert store.verify() == []


class TestStoreConsistency:
    def test_verify_after_mixed_operations(self, store, gazetteer):
        from geolit.geotag import tag_document

        lines = [
            record_line("d1", "Flooding in Canada rose sharply this decade."),
            record_line("d2", "Drought across India and Kenya intensified."),
            record_line("d3", "Wildfire smoke from California reached Nevada."),
        ]
        ingest(lines, store)
        for doc_id in store.doc_ids():
            doc = store.get_document(doc_id)
            store.apply_geo_tags(doc_id, tag_document(doc, gazetteer), gazetteer)
        gid = store.create_group("g-all", store.doc_ids())
        store.persist_topic_model(_tiny_model(store.doc_ids()))
        store.delete_group(gid)
        assert store.verify() == []

    def test_export_reimport_json_lines(self, store, tmp_path):
        for i in range(4):
            store.index_document(_doc(f"d{i}", f"abstract {i} about monsoon rain"))
        # export as JSON Lines and re-ingest into a fresh store
        out = tmp_path / "export.jsonl"
        with open(out, "w", encoding="utf-8") as fh:
            for doc_id in store.doc_ids():
                payload = store.index.get_payload(doc_id)
                fh.write(json.dumps({
                    "id": payload["id"], "title": payload["title"],
                    "abstract": payload["abstract"], "year": payload["year"],
                }) + "\n")
        fresh = Store.open(tmp_path / "fresh")
        with open(out, encoding="utf-8") as fh:
            report = ingest(fh, fresh)
        assert report.accepted == 4
        assert fresh.doc_ids() == store.doc_ids()
        fresh.close()


class TestGroupSets:
    def test_create_and_list(self, store):
        for i in range(4):
            store.index_document(_doc(f"d{i}", f"abstract about heat {i}"))
        a = store.create_group("a", ["d0", "d1"])
        b = store.create_group("b", ["d2", "d3"])
        gs = store.create_group_set("pair", [a, b])
        rows = store.list_group_sets()
        assert rows[0]["group_set_id"] == gs
        assert rows[0]["group_ids"] == [a, b]

    def test_unknown_group_rejected(self, store):
        with pytest.raises(UnknownGroup):
            store.create_group_set("x", ["nope"])

    def test_duplicate_name(self, store):
        store.index_document(_doc("d0", "abstract about heat zero"))
        a = store.create_group("a", ["d0"])
        store.create_group_set("x", [a])
        with pytest.raises(DuplicateName):
            store.create_group_set("x", [a])


class TestPortability:
    def test_export_import_roundtrip(self, store, tmp_path, gazetteer):
        from geolit.geotag import tag_document

        docs = [
            _doc("d1", "Flooding in Canada rose sharply this decade."),
            _doc("d2", "Drought across Kenya intensified."),
        ]
        for d in docs:
            store.index_document(d)
            store.apply_geo_tags(d.doc_id, tag_document(d, gazetteer), gazetteer)
        out = tmp_path / "dump.jsonl"
        assert store.export_jsonl(out) == 2

        fresh = Store.open(tmp_path / "fresh")
        assert fresh.import_jsonl(out, gazetteer) == 2
        assert fresh.doc_ids() == store.doc_ids()
        assert fresh.execute("geo:Canada")[0] == store.execute("geo:Canada")[0]
        assert fresh.verify() == []
        # re-import skips existing ids
        assert fresh.import_jsonl(out, gazetteer) == 0
        fresh.close()

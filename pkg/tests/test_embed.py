from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geolit.corpus import Document
from geolit.embed import (
    EmbeddingMatrix,
    FileVectors,
    cosine,
    embed_documents,
    fit_baseline,
    tokenize,
)
from geolit.errors import DimensionMismatch, DimTooLarge, MissingVector, ZeroVector


def _doc(doc_id: str, abstract: str, title: str = "") -> Document:
    return Document(doc_id=doc_id, title=title, abstract=abstract)


class TestCosine:
    def test_identical(self):
        assert cosine([1, 0, 0], [1, 0, 0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1, 0], [0, 1]) == pytest.approx(0.0)

    def test_forty_five_degrees(self):
        # 1/sqrt(2), worked by hand
        assert cosine([1, 1], [1, 0]) == pytest.approx(0.70711, abs=1e-5)

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            cosine([0, 0], [1, 0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine([1, 0], [1, 0, 0])

    # components either zero or of sane magnitude: scale invariance genuinely
    # breaks when alpha*u underflows a subnormal component to zero
    _component = st.floats(-100, 100).map(lambda x: 0.0 if abs(x) < 1e-3 else x)

    @given(
        st.lists(_component, min_size=2, max_size=6),
        st.lists(_component, min_size=2, max_size=6),
        st.floats(0.01, 50),
    )
    @settings(max_examples=150, deadline=None)
    def test_properties(self, u, v, alpha):
        n = min(len(u), len(v))
        u, v = np.array(u[:n]), np.array(v[:n])
        if np.linalg.norm(u) == 0 or np.linalg.norm(v) == 0:
            return
        c = cosine(u, v)
        assert abs(c) <= 1 + 1e-12
        assert c == pytest.approx(cosine(v, u))
        assert c == pytest.approx(cosine(alpha * u, v), abs=1e-9)


class TestTokenize:
    def test_stopwords_and_case(self):
        assert tokenize("Flooding in the Delta!") == ["flooding", "delta"]

    def test_empty(self):
        assert tokenize("") == []

    def test_duplicates_preserved(self):
        assert tokenize("CO2 CO2") == ["co2", "co2"]

    def test_short_terms_dropped(self):
        assert tokenize("a b sea") == ["sea"]

    def test_deterministic(self):
        text = "Glacier retreat accelerates; meltwater floods valleys."
        assert tokenize(text) == tokenize(text)


class TestFitBaseline:
    def test_disjoint_vocabularies_orthogonal(self):
        # 2 docs with disjoint one-term vocabularies, dim=2: embeddings orthogonal
        docs = [_doc("a", "flood flood flood"), _doc("b", "fire fire fire")]
        model = fit_baseline(docs, 2)
        emb = embed_documents(docs, model)
        dot = float(emb.rows[0] @ emb.rows[1])
        assert dot == pytest.approx(0.0, abs=1e-9)
        # each embedding essentially axis-aligned in the latent space
        for row in emb.rows:
            assert np.sort(np.abs(row))[-1] == pytest.approx(1.0, abs=1e-9)

    def test_dim_too_large(self):
        docs = [_doc("a", "flood river"), _doc("b", "fire forest")]
        with pytest.raises(DimTooLarge):
            fit_baseline(docs, 3)

    def test_identical_docs_identical_rows(self):
        docs = [_doc(f"d{i}", "permafrost thaw subsidence arctic") for i in range(4)]
        model = fit_baseline(docs, 1)
        emb = embed_documents(docs, model)
        for row in emb.rows[1:]:
            np.testing.assert_allclose(row, emb.rows[0], atol=1e-12)

    def test_idf_formula(self):
        docs = [_doc("a", "flood river"), _doc("b", "flood coast"), _doc("c", "storm surge")]
        model = fit_baseline(docs, 2)
        flood_idx = model.vocabulary.index("flood")
        assert model.doc_frequency[flood_idx] == 2
        assert model.idf[flood_idx] == pytest.approx(math.log(1 + 3 / 3))
        assert model.vocabulary == sorted(model.vocabulary)
        assert np.all(model.idf >= 0)

    def test_refit_deterministic(self):
        docs = [
            _doc("a", "flood river delta"), _doc("b", "fire forest smoke"),
            _doc("c", "heat wave city"), _doc("d", "storm surge coast"),
        ]
        m1 = fit_baseline(docs, 3, seed=42)
        m2 = fit_baseline(docs, 3, seed=42)
        np.testing.assert_array_equal(m1.projection, m2.projection)


class TestEmbedDocuments:
    def test_file_backed_normalizes(self, tmp_path):
        path = tmp_path / "vectors.tsv"
        path.write_text("d1\t3,4\n", encoding="utf-8")
        vectors = FileVectors.load(path)
        emb = embed_documents([_doc("d1", "x")], vectors)
        np.testing.assert_allclose(emb.rows[0], [0.6, 0.8])

    def test_missing_vector(self, tmp_path):
        path = tmp_path / "vectors.tsv"
        path.write_text("d1\t1,0\n", encoding="utf-8")
        vectors = FileVectors.load(path)
        with pytest.raises(MissingVector):
            embed_documents([_doc("dX", "x")], vectors)

    def test_mixed_dims_rejected(self, tmp_path):
        path = tmp_path / "vectors.tsv"
        path.write_text("d1\t1,0\nd2\t1,0,0\n", encoding="utf-8")
        with pytest.raises(DimensionMismatch):
            FileVectors.load(path)

    def test_pure_function(self, tmp_path):
        path = tmp_path / "vectors.tsv"
        path.write_text("d1\t1,2\nd2\t-1,5\n", encoding="utf-8")
        vectors = FileVectors.load(path)
        docs = [_doc("d1", "x"), _doc("d2", "y")]
        a = embed_documents(docs, vectors)
        b = embed_documents(docs, vectors)
        assert a.doc_ids == b.doc_ids
        assert a.rows.tobytes() == b.rows.tobytes()

    def test_row_order_matches_input(self, tmp_path):
        path = tmp_path / "vectors.tsv"
        path.write_text("d1\t1,0\nd2\t0,1\n", encoding="utf-8")
        vectors = FileVectors.load(path)
        emb = embed_documents([_doc("d2", "x"), _doc("d1", "y")], vectors)
        assert emb.doc_ids == ["d2", "d1"]
        np.testing.assert_allclose(emb.rows[0], [0, 1])

    def test_unit_rows_invariant(self):
        docs = [_doc(f"d{i}", t) for i, t in enumerate(
            ["flood plain risk", "wildfire smoke spread", "drought soil moisture"]
        )]
        model = fit_baseline(docs, 2)
        emb = embed_documents(docs, model)
        np.testing.assert_allclose(np.linalg.norm(emb.rows, axis=1), 1.0, atol=1e-6)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            EmbeddingMatrix(doc_ids=["a", "a"], rows=np.eye(2))

    def test_baseline_similarity_ordering(self):
        # identical docs are at least as similar as disjoint-vocabulary docs
        docs = [
            _doc("a1", "flood river delta levee"),
            _doc("a2", "flood river delta levee"),
            _doc("b", "wildfire smoke forest ash"),
        ]
        model = fit_baseline(docs, 2)
        emb = embed_documents(docs, model)
        same = float(emb.rows[0] @ emb.rows[1])
        cross = float(emb.rows[0] @ emb.rows[2])
        assert same >= cross
        assert same == pytest.approx(1.0, abs=1e-9)

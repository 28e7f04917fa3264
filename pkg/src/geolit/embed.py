"""Document embeddings and the similarity kernel.

Two interchangeable embedding sources feed the rest of the engine:

* :class:`FileVectors` — externally precomputed vectors (e.g. from a sentence
  transformer) loaded from a tab-separated file, one document per line.
* :class:`VocabModel` — a deterministic latent-semantic baseline: TF-IDF over
  the corpus followed by a truncated singular value decomposition, so the
  engine works with no model runtime at all.

Both produce an :class:`EmbeddingMatrix` with unit-norm rows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import DimensionMismatch, DimTooLarge, MissingVector, ZeroVector

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _load_stopwords() -> frozenset[str]:
    text = resources.files("geolit.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


STOPWORDS: frozenset[str] = _load_stopwords()


def tokenize(text: str) -> list[str]:
    """Split text into terms: lowercase, alphanumeric runs only, no stopwords.

    Terms shorter than 2 characters are dropped. Duplicates are preserved in
    order, so the output doubles as a term-frequency stream.
    """
    return [
        t for t in _TOKEN_RE.findall(text.lower())
        if len(t) >= 2 and t not in STOPWORDS
    ]


def document_terms(doc) -> list[str]:
    """Terms of a document record: title terms followed by abstract terms."""
    return tokenize(doc.title) + tokenize(doc.abstract)


def cosine(u, v) -> float:
    """Cosine similarity <u,v> / (|u||v|), in [-1, 1].

    The result is clamped to [-1, 1]: rounding on ill-conditioned inputs can
    push the raw quotient past 1, and callers rely on the bound.
    """
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise DimensionMismatch(f"cosine of {u.shape[0]}-dim and {v.shape[0]}-dim vectors")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine is undefined for zero vectors")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


# ---------------------------------------------------------------------------
# Truncated SVD (randomized subspace iteration)
# ---------------------------------------------------------------------------


def randomized_svd(a, rank: int, seed: int = 42, n_iter: int = 8, oversample: int = 8):
    """Rank-truncated SVD via seeded randomized subspace iteration.

    Deterministic for a fixed seed. Sign convention: the first entry of each
    right-singular vector with magnitude above 1e-12 is made positive, and the
    matching left-singular vector is flipped with it.

    `a` may be a dense ndarray or a scipy sparse matrix. Returns (U, s, Vt)
    truncated to `rank`.
    """
    n, m = a.shape
    k = min(rank + oversample, m, n)
    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((m, k))
    y = a @ omega
    q, _ = np.linalg.qr(y)
    for _ in range(n_iter):
        q, _ = np.linalg.qr(a.T @ q)
        q, _ = np.linalg.qr(a @ q)
    b = q.T @ a
    b = np.asarray(b)
    u_b, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ u_b
    u, s, vt = u[:, :rank].copy(), s[:rank].copy(), vt[:rank].copy()
    for j in range(vt.shape[0]):
        nz = np.flatnonzero(np.abs(vt[j]) > 1e-12)
        if nz.size and vt[j, nz[0]] < 0:
            vt[j] = -vt[j]
            u[:, j] = -u[:, j]
    return u, s, vt


# ---------------------------------------------------------------------------
# Providers
# ---------------------------------------------------------------------------


@dataclass
class EmbeddingMatrix:
    """Unit-norm embedding rows aligned with an ordered doc id list."""

    doc_ids: list[str]
    rows: np.ndarray  # N x dim, float64, each row unit L2 norm

    @property
    def dim(self) -> int:
        return int(self.rows.shape[1])

    def __post_init__(self):
        if len(self.doc_ids) != self.rows.shape[0]:
            raise DimensionMismatch("doc_ids and rows disagree on N")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise ValueError("duplicate doc_ids in embedding matrix")


@dataclass
class VocabModel:
    """Latent-semantic baseline fitted on a corpus.

    Immutable after fit; safe to share across threads.
    """

    vocabulary: list[str]           # sorted ascending
    doc_frequency: np.ndarray       # per-term document counts
    idf: np.ndarray                 # ln(1 + N/(1+df))
    projection: np.ndarray          # V x dim term-side projection
    seed: int = 42

    @property
    def dim(self) -> int:
        return int(self.projection.shape[1])

    def _term_index(self) -> dict[str, int]:
        cached = getattr(self, "_tix", None)
        if cached is None:
            cached = {t: i for i, t in enumerate(self.vocabulary)}
            self._tix = cached
        return cached

    def text_vector(self, text: str) -> np.ndarray:
        """Fold a raw text into the latent space (not normalized)."""
        return self._fold(tokenize(text))

    def document_vector(self, doc) -> np.ndarray:
        return self._fold(document_terms(doc))

    def _fold(self, terms: list[str]) -> np.ndarray:
        tix = self._term_index()
        weights = np.zeros(len(self.vocabulary))
        for t in terms:
            i = tix.get(t)
            if i is not None:
                weights[i] += self.idf[i]
        return weights @ self.projection


def fit_baseline(corpus: Sequence, dim: int, seed: int = 42) -> VocabModel:
    """Fit the TF-IDF + truncated-SVD baseline on a document collection.

    Raises DimTooLarge when `dim` exceeds min(vocabulary size, corpus size).
    """
    docs = list(corpus)
    if not docs:
        raise DimTooLarge("cannot fit a baseline on an empty corpus")
    term_lists = [document_terms(d) for d in docs]
    vocabulary = sorted({t for terms in term_lists for t in terms})
    n_docs, n_terms = len(docs), len(vocabulary)
    if dim > min(n_docs, n_terms):
        raise DimTooLarge(f"dim={dim} exceeds min(N={n_docs}, V={n_terms})")
    tix = {t: i for i, t in enumerate(vocabulary)}

    df = np.zeros(n_terms)
    for terms in term_lists:
        for i in {tix[t] for t in terms}:
            df[i] += 1
    idf = np.log(1.0 + n_docs / (1.0 + df))

    mat = sparse.lil_matrix((n_docs, n_terms))
    for r, terms in enumerate(term_lists):
        for t in terms:
            mat[r, tix[t]] += 1
    mat = mat.tocsr().multiply(idf).tocsr()

    _, _, vt = randomized_svd(mat, dim, seed=seed)
    return VocabModel(
        vocabulary=vocabulary,
        doc_frequency=df,
        idf=idf,
        projection=np.ascontiguousarray(vt.T),
        seed=seed,
    )


class FileVectors:
    """Precomputed vectors loaded from `doc_id<TAB>v1,v2,...,vD` lines."""

    def __init__(self, vectors: dict[str, np.ndarray]):
        self._vectors = vectors
        dims = {v.shape[0] for v in vectors.values()}
        if len(dims) > 1:
            raise DimensionMismatch(f"vector file mixes dimensions: {sorted(dims)}")

    @classmethod
    def load(cls, path: str | Path) -> "FileVectors":
        vectors: dict[str, np.ndarray] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                doc_id, _, rest = line.partition("\t")
                vectors[doc_id] = np.array([float(x) for x in rest.split(",")])
        return cls(vectors)

    def document_vector(self, doc) -> np.ndarray:
        vec = self._vectors.get(doc.doc_id)
        if vec is None:
            raise MissingVector(f"no vector for document {doc.doc_id!r}")
        return vec


def embed_documents(docs: Iterable, provider) -> EmbeddingMatrix:
    """Embed documents in order through `provider`, unit-normalizing each row.

    `provider` is anything with a `document_vector(doc)` method (a fitted
    VocabModel or a FileVectors). A document that maps to the zero vector
    raises ZeroVector: unit rows are part of the contract.
    """
    docs = list(docs)
    doc_ids = [d.doc_id for d in docs]
    raw = []
    for d in docs:
        vec = np.asarray(provider.document_vector(d), dtype=float).ravel()
        raw.append(vec)
    if raw and len({v.shape[0] for v in raw}) > 1:
        raise DimensionMismatch("provider returned vectors of mixed dimension")
    rows = np.vstack(raw) if raw else np.zeros((0, 0))
    if rows.size:
        norms = np.linalg.norm(rows, axis=1)
        bad = np.flatnonzero(norms == 0.0)
        if bad.size:
            raise ZeroVector(f"document {doc_ids[bad[0]]!r} embeds to the zero vector")
        rows = rows / norms[:, None]
    return EmbeddingMatrix(doc_ids=doc_ids, rows=rows)

"""Dimensionality reduction for document embeddings.

Two reducers behind one call. `truncated-svd` is the default: center, take
the top principal directions by a seeded randomized SVD, fully deterministic.
`neighbor-graph` is the fidelity option: a k-nearest-neighbor fuzzy graph
(per-point connectivity radius rho = nearest-neighbor distance, bandwidth
sigma calibrated so each point's outgoing weights sum to log2(k)), symmetrized
with the probabilistic t-conorm, then laid out by seeded stochastic gradient
descent on the graph cross-entropy for a fixed 200 iterations.
"""

from __future__ import annotations

import numpy as np

from ..embed import randomized_svd
from ..errors import TooFewPoints
from .density import pairwise_euclidean

LAYOUT_ITERATIONS = 200
NEGATIVE_SAMPLES = 5


def reduce_svd(rows: np.ndarray, target_dim: int, seed: int = 42) -> np.ndarray:
    """Centered rank-d projection keeping maximal variance."""
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    if n < target_dim:
        raise TooFewPoints(f"cannot reduce {n} points to {target_dim} dimensions")
    centered = rows - rows.mean(axis=0, keepdims=True)
    u, s, _ = randomized_svd(centered, target_dim, seed=seed)
    return u * s


def _smooth_weights(dists: np.ndarray, k: int) -> np.ndarray:
    """Per-point edge weights exp(-(d - rho)/sigma) with sigma calibrated.

    `dists` holds each point's k nearest-neighbor distances (self excluded),
    sorted ascending. sigma solves sum_j exp(-max(0, d_j - rho)/sigma) =
    log2(k) by bisection.
    """
    n = dists.shape[0]
    target = np.log2(k)
    weights = np.zeros_like(dists)
    for i in range(n):
        rho = dists[i, 0]
        gaps = np.maximum(dists[i] - rho, 0.0)
        if np.all(gaps == 0.0):
            weights[i] = 1.0
            continue
        lo, hi = 1e-12, 1.0
        while np.sum(np.exp(-gaps / hi)) < target:
            hi *= 2.0
            if hi > 1e12:
                break
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if np.sum(np.exp(-gaps / mid)) < target:
                lo = mid
            else:
                hi = mid
        weights[i] = np.exp(-gaps / hi)
    return weights


def reduce_neighbor_graph(
    rows: np.ndarray,
    target_dim: int,
    n_neighbors: int = 15,
    seed: int = 42,
) -> np.ndarray:
    """Fuzzy k-NN graph + seeded SGD cross-entropy layout."""
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    if n < target_dim:
        raise TooFewPoints(f"cannot reduce {n} points to {target_dim} dimensions")
    k = min(n_neighbors, n - 1)
    if k < 1:
        raise TooFewPoints("neighbor-graph reduction needs at least 2 points")

    dist = pairwise_euclidean(rows)
    order = np.argsort(dist, axis=1, kind="stable")
    knn_idx = order[:, 1 : k + 1]
    knn_dist = np.take_along_axis(dist, knn_idx, axis=1)
    w = _smooth_weights(knn_dist, k)

    # symmetrize: P = P + P^T - P o P^T over the sparse k-NN support
    p = np.zeros((n, n))
    for i in range(n):
        p[i, knn_idx[i]] = w[i]
    p = p + p.T - p * p.T

    src, dst = np.nonzero(np.triu(p, k=1))
    edge_w = p[src, dst]
    if src.size == 0:
        return np.zeros((n, target_dim))

    rng = np.random.default_rng(seed)
    # deterministic init from the spectral-ish SVD coordinates, jittered
    init = reduce_svd(rows, target_dim, seed=seed)
    scale = np.abs(init).max()
    emb = (init / scale * 10.0 if scale > 0 else init) + rng.normal(0, 1e-4, init.shape)

    probs = edge_w / edge_w.sum()
    for it in range(LAYOUT_ITERATIONS):
        alpha = 1.0 * (1.0 - it / LAYOUT_ITERATIONS)
        picked = rng.choice(src.size, size=src.size, p=probs)
        for e in picked:
            i, j = int(src[e]), int(dst[e])
            diff = emb[i] - emb[j]
            d2 = float(diff @ diff)
            grad = (-2.0 / (1.0 + d2)) * diff  # attractive, kernel 1/(1+d^2)
            emb[i] += alpha * np.clip(grad, -4.0, 4.0)
            emb[j] -= alpha * np.clip(grad, -4.0, 4.0)
            for _ in range(NEGATIVE_SAMPLES):
                m = int(rng.integers(0, n))
                if m == i:
                    continue
                diff = emb[i] - emb[m]
                d2 = float(diff @ diff)
                grad = (2.0 / ((0.001 + d2) * (1.0 + d2))) * diff  # repulsive
                emb[i] += alpha * np.clip(grad, -4.0, 4.0)
    return emb


def reduce_embeddings(rows, cfg, seed: int = 42) -> np.ndarray:
    """Dispatch on cfg.reducer ("truncated-svd" | "neighbor-graph").

    Accepts an EmbeddingMatrix or a raw N x dim array.
    """
    rows = getattr(rows, "rows", rows)
    if cfg.reducer == "truncated-svd":
        return reduce_svd(rows, cfg.target_dim, seed=seed)
    if cfg.reducer == "neighbor-graph":
        return reduce_neighbor_graph(
            rows, cfg.target_dim, n_neighbors=cfg.n_neighbors, seed=seed
        )
    raise ValueError(f"unknown reducer {cfg.reducer!r}")

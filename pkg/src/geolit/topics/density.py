"""Hierarchical density-based clustering over mutual-reachability distances.

The pipeline is the standard one for this family of methods: pairwise
Euclidean distances -> core distances -> mutual reachability -> minimum
spanning tree -> single-linkage dendrogram -> condensed tree (minimum cluster
size) -> per-cluster stability (excess of mass) -> flat cluster selection.

Everything here is deterministic. MST ties are broken by
(weight, smaller endpoint id, larger endpoint id); merge heights of zero map
to an infinite density level, matching the published convention. The root of
the condensed tree is never selected as a flat cluster, so data with no
internal density structure comes back as all noise.
"""

from __future__ import annotations

import numpy as np

from ..errors import TooFewPoints


def pairwise_euclidean(points: np.ndarray) -> np.ndarray:
    """Dense symmetric Euclidean distance matrix with an exact zero diagonal."""
    pts = np.asarray(points, dtype=float)
    sq = np.sum(pts * pts, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T)
    np.maximum(d2, 0.0, out=d2)
    dist = np.sqrt(d2)
    np.fill_diagonal(dist, 0.0)
    return dist


def core_distances(dist: np.ndarray, min_samples: int) -> np.ndarray:
    """Distance to each point's min_samples-th nearest neighbor.

    The point itself counts as its own first neighbor (distance zero), so
    min_samples=1 gives all zeros. min_samples is clamped to N.
    """
    n = dist.shape[0]
    k = min(max(min_samples, 1), n)
    return np.partition(dist, k - 1, axis=1)[:, k - 1]


def mutual_reachability(points: np.ndarray, min_samples: int) -> np.ndarray:
    """d_mr(a, b) = max(core_a, core_b, d(a, b)); diagonal fixed at zero."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n < min_samples:
        raise TooFewPoints(f"need at least min_samples={min_samples} points, got {n}")
    dist = pairwise_euclidean(pts)
    core = core_distances(dist, min_samples)
    mr = np.maximum(dist, np.maximum(core[:, None], core[None, :]))
    np.fill_diagonal(mr, 0.0)
    return mr


def minimum_spanning_tree(weights: np.ndarray) -> list[tuple[float, int, int]]:
    """Kruskal MST over a dense symmetric weight matrix.

    Edges are considered in (weight, i, j) order with i < j, which fixes the
    tree under ties. Returns the accepted edges in acceptance order.
    """
    n = weights.shape[0]
    if n == 0:
        raise TooFewPoints("empty point set")
    if n == 1:
        return []
    ii, jj = np.triu_indices(n, k=1)
    ww = weights[ii, jj]
    order = np.lexsort((jj, ii, ww))

    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges: list[tuple[float, int, int]] = []
    for idx in order:
        a, b = int(ii[idx]), int(jj[idx])
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[ra] = rb
        edges.append((float(ww[idx]), a, b))
        if len(edges) == n - 1:
            break
    return edges


def single_linkage_tree(mst_edges: list[tuple[float, int, int]], n: int) -> np.ndarray:
    """Dendrogram rows [left_node, right_node, height, size] from MST edges.

    Points are nodes 0..n-1; the t-th merge creates node n+t. Edges must
    already be in merge order (nondecreasing weight), as Kruskal emits them.
    """
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    current = list(range(n))        # root -> current dendrogram node
    size = [1] * n
    rows = np.zeros((len(mst_edges), 4))
    for t, (w, a, b) in enumerate(mst_edges):
        ra, rb = find(a), find(b)
        rows[t] = (current[ra], current[rb], w, size[ra] + size[rb])
        parent[ra] = rb
        current[rb] = n + t
        size[rb] = int(rows[t, 3])
    return rows


def _lambda_of(height: float) -> float:
    return 1.0 / height if height > 0.0 else np.inf


def condense_tree(
    linkage: np.ndarray, n: int, min_cluster_size: int
) -> list[tuple[int, int, float, int]]:
    """Condensed tree rows (parent, child, lambda, child_size).

    Children smaller than min_cluster_size fall out of their parent cluster as
    points at the lambda of the split; splits where both sides are large
    create two new clusters. Cluster ids start at n (the root is n).
    """
    if n == 0:
        return []
    if len(linkage) == 0:
        return []
    children: dict[int, tuple[int, int, float]] = {}
    for t, (left, right, height, _size) in enumerate(linkage):
        children[n + t] = (int(left), int(right), float(height))

    def leaves(node: int) -> list[int]:
        out: list[int] = []
        stack = [node]
        while stack:
            cur = stack.pop()
            if cur < n:
                out.append(cur)
            else:
                l, r, _ = children[cur]
                stack.extend((l, r))
        return out

    def subtree_size(node: int) -> int:
        return 1 if node < n else int(linkage[node - n, 3])

    rows: list[tuple[int, int, float, int]] = []
    root = n + len(linkage) - 1
    next_label = n + 1
    # stack of (dendrogram node, condensed cluster label)
    stack: list[tuple[int, int]] = [(root, n)]
    while stack:
        node, label = stack.pop()
        if node < n:
            # a bare point reached directly: it leaves its cluster at lambda=inf
            rows.append((label, node, np.inf, 1))
            continue
        left, right, height = children[node]
        lam = _lambda_of(height)
        left_size, right_size = subtree_size(left), subtree_size(right)
        big_left = left_size >= min_cluster_size
        big_right = right_size >= min_cluster_size
        if big_left and big_right:
            left_label, next_label = next_label, next_label + 1
            rows.append((label, left_label, lam, left_size))
            right_label, next_label = next_label, next_label + 1
            rows.append((label, right_label, lam, right_size))
            stack.append((left, left_label))
            stack.append((right, right_label))
        elif not big_left and not big_right:
            for p in leaves(left):
                rows.append((label, p, lam, 1))
            for p in leaves(right):
                rows.append((label, p, lam, 1))
        elif big_left:
            for p in leaves(right):
                rows.append((label, p, lam, 1))
            stack.append((left, label))
        else:
            for p in leaves(left):
                rows.append((label, p, lam, 1))
            stack.append((right, label))
    return rows


def compute_stability(condensed: list[tuple[int, int, float, int]], n: int) -> dict[int, float]:
    """Excess-of-mass stability per condensed cluster.

    stability(C) = sum over rows with parent C of (lambda_row - birth(C)) * size,
    where birth(C) is the lambda at which C appeared (0 for the root).
    """
    births: dict[int, float] = {}
    for parent, child, lam, size in condensed:
        if child >= n:
            births[child] = lam
    stability: dict[int, float] = {}
    for parent, child, lam, size in condensed:
        birth = births.get(parent, 0.0)
        gain = (lam - birth) * size
        if np.isnan(gain):  # inf - inf on degenerate all-coincident splits
            gain = 0.0
        stability[parent] = stability.get(parent, 0.0) + gain
    return stability


def select_clusters(
    condensed: list[tuple[int, int, float, int]],
    stability: dict[int, float],
    n: int,
) -> set[int]:
    """Flat cluster selection: keep a cluster unless its children beat it.

    Processes clusters deepest-first; a selected cluster deselects its whole
    subtree. The root is excluded from selection.
    """
    cluster_children: dict[int, list[int]] = {}
    for parent, child, _lam, _size in condensed:
        if child >= n:
            cluster_children.setdefault(parent, []).append(child)

    all_clusters = set(stability) | {c for kids in cluster_children.values() for c in kids}
    node_list = sorted((c for c in all_clusters if c != n), reverse=True)
    is_cluster = {c: True for c in node_list}
    stab = {c: stability.get(c, 0.0) for c in all_clusters}

    def descendants(node: int):
        stack = list(cluster_children.get(node, []))
        while stack:
            cur = stack.pop()
            yield cur
            stack.extend(cluster_children.get(cur, []))

    for node in node_list:
        subtree = sum(stab[c] for c in cluster_children.get(node, []))
        if subtree > stab[node]:
            is_cluster[node] = False
            stab[node] = subtree
        else:
            for d in descendants(node):
                if d in is_cluster:
                    is_cluster[d] = False
    return {c for c, keep in is_cluster.items() if keep}


def labels_from_selection(
    condensed: list[tuple[int, int, float, int]],
    selected: set[int],
    n: int,
) -> np.ndarray:
    """Per-point labels: nearest selected ancestor, else noise (-1).

    Flat labels are renumbered 0..K-1 by (member count desc, smallest member),
    so label 0 is always the largest cluster.
    """
    labels = np.full(n, -1, dtype=int)
    cluster_parent: dict[int, int] = {}
    for parent, child, _lam, _size in condensed:
        if child >= n:
            cluster_parent[child] = parent
    for parent, child, _lam, _size in condensed:
        if child >= n:
            continue
        cur = parent
        assigned = -1
        while cur is not None:
            if cur in selected:
                assigned = cur
                break
            cur = cluster_parent.get(cur)
        labels[child] = assigned

    members: dict[int, list[int]] = {}
    for p, lab in enumerate(labels):
        if lab != -1:
            members.setdefault(int(lab), []).append(p)
    order = sorted(members, key=lambda c: (-len(members[c]), min(members[c])))
    remap = {c: i for i, c in enumerate(order)}
    out = np.full(n, -1, dtype=int)
    for p, lab in enumerate(labels):
        if lab != -1:
            out[p] = remap[int(lab)]
    return out


def hdbscan_labels(
    points: np.ndarray,
    min_cluster_size: int,
    min_samples: int | None = None,
) -> np.ndarray:
    """Flat density-based cluster assignment; -1 marks noise.

    A point set smaller than min_cluster_size cannot form any cluster and
    comes back as all noise.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise TooFewPoints("points must be a 2-D array")
    n = pts.shape[0]
    if n == 0:
        raise TooFewPoints("empty point set")
    if min_cluster_size < 2:
        raise ValueError("min_cluster_size must be >= 2")
    if n < min_cluster_size:
        return np.full(n, -1, dtype=int)
    k = min_samples if min_samples is not None else min_cluster_size
    mr = mutual_reachability(pts, min(k, n))
    mst = minimum_spanning_tree(mr)
    linkage = single_linkage_tree(mst, n)
    condensed = condense_tree(linkage, n, min_cluster_size)
    stability = compute_stability(condensed, n)
    selected = select_clusters(condensed, stability, n)
    return labels_from_selection(condensed, selected, n)

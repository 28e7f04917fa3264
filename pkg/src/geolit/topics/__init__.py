"""Density-based topic modeling over document embeddings."""

from .density import (
    core_distances,
    hdbscan_labels,
    minimum_spanning_tree,
    mutual_reachability,
    pairwise_euclidean,
)
from .model import (
    ModelConfig,
    Topic,
    TopicModel,
    ctfidf,
    fit_topic_model,
    representative_docs,
    top_terms,
)
from .reducers import reduce_embeddings, reduce_neighbor_graph, reduce_svd

__all__ = [
    "ModelConfig",
    "Topic",
    "TopicModel",
    "core_distances",
    "ctfidf",
    "fit_topic_model",
    "hdbscan_labels",
    "minimum_spanning_tree",
    "mutual_reachability",
    "pairwise_euclidean",
    "reduce_embeddings",
    "reduce_neighbor_graph",
    "reduce_svd",
    "representative_docs",
    "top_terms",
]

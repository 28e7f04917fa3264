"""geolit: geographic analytics and density-based topic modeling for
scientific abstract corpora.

The engine ingests abstract records, tags them with gazetteer-resolved
countries/states/cities, computes location-frequency analytics, fits
density-based topic models over query-scoped document sets, and summarizes
topics — as a library, a CLI (``geolit``), and an HTTP service.
"""

from .corpus import CategoryDef, Document, FilterConfig, IngestReport, assign_categories, ingest, parse_record
from .embed import EmbeddingMatrix, FileVectors, VocabModel, cosine, embed_documents, fit_baseline, tokenize
from .geotag import CandidateSpan, Gazetteer, GeoEntry, GeoTag, extract_mentions, resolve, tag_document
from .store import Store
from .summarize import Summary, SummaryRequest, build_prompt, summarize_extractive, summarize_remote
from .topics import ModelConfig, Topic, TopicModel, fit_topic_model, hdbscan_labels

__version__ = "0.1.0"

__all__ = [
    "CandidateSpan",
    "CategoryDef",
    "Document",
    "EmbeddingMatrix",
    "FileVectors",
    "FilterConfig",
    "Gazetteer",
    "GeoEntry",
    "GeoTag",
    "IngestReport",
    "ModelConfig",
    "Store",
    "Summary",
    "SummaryRequest",
    "Topic",
    "TopicModel",
    "VocabModel",
    "assign_categories",
    "build_prompt",
    "cosine",
    "embed_documents",
    "extract_mentions",
    "fit_baseline",
    "fit_topic_model",
    "hdbscan_labels",
    "ingest",
    "parse_record",
    "resolve",
    "summarize_extractive",
    "summarize_remote",
    "tag_document",
    "tokenize",
]

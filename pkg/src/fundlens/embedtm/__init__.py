"""Embedding-based topic modeling: reduce, cluster, represent."""

from fundlens.embedtm.cluster import (
    DEFAULT_LINKAGE_THRESHOLD,
    DEFAULT_MIN_TOPIC_SIZE,
    MODES,
    NOISE,
    ClusterModel,
    TopicSizeStats,
    cluster_embeddings,
    finalize_mode,
    hierarchical_reduce,
    load_cluster_model,
    save_cluster_model,
    topic_size_stats,
)
from fundlens.embedtm.embeddings import (
    EmbeddingSet,
    cosine_similarity,
    cosine_to_many,
    load_embeddings,
    write_embeddings,
)
from fundlens.embedtm.reduce import DimensionReducer, fit_reducer, reduce_dimensions
from fundlens.embedtm.represent import (
    DEFAULT_MMR_LAMBDA,
    TopicRepresentation,
    centroid_topic_words,
    ctfidf_mmr_words,
    ctfidf_scores,
    mmr_select,
)

__all__ = [
    "DEFAULT_LINKAGE_THRESHOLD",
    "DEFAULT_MIN_TOPIC_SIZE",
    "DEFAULT_MMR_LAMBDA",
    "MODES",
    "NOISE",
    "ClusterModel",
    "DimensionReducer",
    "EmbeddingSet",
    "TopicRepresentation",
    "TopicSizeStats",
    "centroid_topic_words",
    "cluster_embeddings",
    "cosine_similarity",
    "cosine_to_many",
    "ctfidf_mmr_words",
    "ctfidf_scores",
    "finalize_mode",
    "fit_reducer",
    "hierarchical_reduce",
    "load_cluster_model",
    "load_embeddings",
    "mmr_select",
    "reduce_dimensions",
    "save_cluster_model",
    "topic_size_stats",
    "write_embeddings",
]

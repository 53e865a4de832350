"""Deterministic agglomerative clustering over cosine distance.

Average-linkage merges are cut at a distance threshold; clusters smaller
than ``min_topic_size`` are relabeled NOISE. Two finishing modes exist:
``"top2vec"`` reassigns every NOISE point to its nearest centroid so no
outliers remain, ``"bertopic"`` keeps the NOISE class. Hierarchical topic
reduction repeatedly folds the smallest topic into the one with the most
similar centroid until a target topic count is reached.

All ties are ordered (lowest index / lexicographic member id), so fixed
inputs give identical clusterings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform

from fundlens.embedtm.embeddings import EmbeddingSet, cosine_similarity

NOISE = -1

MODES = ("top2vec", "bertopic")
DEFAULT_MIN_TOPIC_SIZE = 10
DEFAULT_LINKAGE_THRESHOLD = 0.35


@dataclass
class ClusterModel:
    labels: dict[str, int]  # chunk_id -> topic index or NOISE
    centroids: np.ndarray  # (n_topics, dim)
    mode: str
    min_topic_size: int
    linkage_threshold: float
    space: EmbeddingSet | None = field(repr=False, default=None)

    @property
    def n_topics(self) -> int:
        return self.centroids.shape[0]

    def topic_sizes(self) -> list[int]:
        sizes = [0] * self.n_topics
        for topic in self.labels.values():
            if topic != NOISE:
                sizes[topic] += 1
        return sizes

    def members(self, topic: int) -> list[str]:
        return sorted(cid for cid, t in self.labels.items() if t == topic)

    def noise_ids(self) -> list[str]:
        return sorted(cid for cid, t in self.labels.items() if t == NOISE)


@dataclass
class TopicSizeStats:
    n_topics: int
    n_outliers: int
    max_members: int
    median_members: float
    mean_members: float
    min_members: int


def _pairwise_cosine_distance(matrix: np.ndarray) -> np.ndarray:
    """Full (n, n) cosine distance matrix with the shared zero-vector policy."""
    norms = np.linalg.norm(matrix, axis=1)
    safe = np.where(norms > 0.0, norms, 1.0)
    unit = matrix / safe[:, None]
    sims = unit @ unit.T
    zero = norms == 0.0
    if zero.any():
        sims[zero, :] = 0.0
        sims[:, zero] = 0.0
        both = np.outer(zero, zero)
        sims[both] = 1.0
    np.clip(sims, -1.0, 1.0, out=sims)
    dist = 1.0 - sims
    np.fill_diagonal(dist, 0.0)
    return np.maximum(dist, 0.0)


def _ordered_topics(groups: dict[int, list[str]]) -> list[list[str]]:
    """Deterministic topic order: descending size, tie toward smallest member id."""
    return [
        members
        for _, members in sorted(
            groups.items(), key=lambda kv: (-len(kv[1]), min(kv[1]))
        )
    ]


def cluster_embeddings(
    emb: EmbeddingSet,
    min_topic_size: int = DEFAULT_MIN_TOPIC_SIZE,
    linkage_threshold: float = DEFAULT_LINKAGE_THRESHOLD,
) -> ClusterModel:
    """Average-linkage clustering cut at ``linkage_threshold`` cosine distance.

    Returns a model in ``"bertopic"`` mode (NOISE retained); apply
    :func:`finalize_mode` to change that.
    """
    if len(emb) == 0:
        raise ValueError("empty embedding set")
    if min_topic_size < 2:
        raise ValueError("min_topic_size must be >= 2")

    n = len(emb)
    if n == 1:
        flat = np.array([1])
    else:
        dist = _pairwise_cosine_distance(emb.matrix)
        merges = linkage(squareform(dist, checks=False), method="average")
        flat = fcluster(merges, t=linkage_threshold, criterion="distance")

    raw_groups: dict[int, list[str]] = {}
    for cid, cluster in zip(emb.ids, flat):
        raw_groups.setdefault(int(cluster), []).append(cid)

    kept = {c: members for c, members in raw_groups.items() if len(members) >= min_topic_size}
    labels: dict[str, int] = {cid: NOISE for cid in emb.ids}
    ordered = _ordered_topics(kept)
    for topic, members in enumerate(ordered):
        for cid in members:
            labels[cid] = topic

    centroids = _centroids_from_labels(labels, emb, len(ordered))
    return ClusterModel(
        labels=labels,
        centroids=centroids,
        mode="bertopic",
        min_topic_size=min_topic_size,
        linkage_threshold=linkage_threshold,
        space=emb,
    )


def _centroids_from_labels(labels: dict[str, int], emb: EmbeddingSet, n_topics: int) -> np.ndarray:
    centroids = np.zeros((n_topics, emb.dim))
    counts = np.zeros(n_topics)
    for cid, topic in labels.items():
        if topic != NOISE:
            centroids[topic] += emb.vector(cid)
            counts[topic] += 1
    for t in range(n_topics):
        if counts[t] > 0:
            centroids[t] /= counts[t]
    return centroids


def finalize_mode(model: ClusterModel, mode: str) -> ClusterModel:
    """Apply the outlier policy: top2vec absorbs NOISE, bertopic keeps it."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "bertopic":
        return replace(model, mode="bertopic", labels=dict(model.labels))

    if model.n_topics == 0:
        raise ValueError("top2vec mode requires at least one topic")
    noise = model.noise_ids()
    if not noise:
        return replace(model, mode="top2vec", labels=dict(model.labels))
    if model.space is None:
        raise ValueError("model has no embedding space; cannot reassign noise points")

    labels = dict(model.labels)
    for cid in noise:
        vec = model.space.vector(cid)
        sims = np.array([cosine_similarity(vec, c) for c in model.centroids])
        labels[cid] = int(np.argmax(sims))  # first max wins ties -> lowest index
    centroids = _centroids_from_labels(labels, model.space, model.n_topics)
    return replace(model, mode="top2vec", labels=labels, centroids=centroids)


def hierarchical_reduce(model: ClusterModel, target_k: int) -> ClusterModel:
    """Merge smallest-into-most-similar until ``target_k`` topics remain.

    Merged centroids are member means, computed as size-weighted centroid
    averages so the operation works on persisted models without vectors.
    Final topics are renumbered by descending size.
    """
    current = model.n_topics
    if target_k < 1:
        raise ValueError("target_k must be >= 1")
    if target_k > current:
        raise ValueError(f"target_k={target_k} exceeds current topic count {current}")
    if target_k == current:
        return model

    work = [
        {"centroid": model.centroids[t].copy(), "members": model.members(t)}
        for t in range(current)
    ]
    while len(work) > target_k:
        sizes = [len(t["members"]) for t in work]
        src = min(range(len(work)), key=lambda i: (sizes[i], i))
        sims = [
            (cosine_similarity(work[src]["centroid"], work[j]["centroid"]), -j)
            for j in range(len(work))
            if j != src
        ]
        best_sim, neg_j = max(sims)
        dst = -neg_j
        n_src, n_dst = sizes[src], sizes[dst]
        work[dst]["centroid"] = (
            n_src * work[src]["centroid"] + n_dst * work[dst]["centroid"]
        ) / (n_src + n_dst)
        work[dst]["members"] = work[dst]["members"] + work[src]["members"]
        del work[src]

    order = sorted(range(len(work)), key=lambda i: (-len(work[i]["members"]), min(work[i]["members"])))
    labels = {cid: NOISE for cid in model.labels}
    centroids = np.zeros((target_k, model.centroids.shape[1]))
    for new_topic, i in enumerate(order):
        centroids[new_topic] = work[i]["centroid"]
        for cid in work[i]["members"]:
            labels[cid] = new_topic
    return replace(model, labels=labels, centroids=centroids)


def topic_size_stats(model: ClusterModel) -> TopicSizeStats:
    """Member-count statistics over topics, plus the NOISE count."""
    sizes = model.topic_sizes()
    if not sizes:
        raise ValueError("model has zero topics")
    arr = np.array(sizes)
    n_outliers = sum(1 for t in model.labels.values() if t == NOISE)
    return TopicSizeStats(
        n_topics=len(sizes),
        n_outliers=n_outliers,
        max_members=int(arr.max()),
        median_members=float(np.median(arr)),
        mean_members=float(arr.mean()),
        min_members=int(arr.min()),
    )


def save_cluster_model(model: ClusterModel, path: str | Path) -> None:
    payload = {
        "format": 1,
        "kind": "cluster",
        "mode": model.mode,
        "min_topic_size": model.min_topic_size,
        "linkage_threshold": model.linkage_threshold,
        "dim": int(model.centroids.shape[1]) if model.n_topics else 0,
        "labels": {cid: int(t) for cid, t in sorted(model.labels.items())},
        "centroids": [[float(x) for x in row] for row in model.centroids],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def load_cluster_model(path: str | Path) -> ClusterModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("kind") != "cluster":
        raise ValueError(f"not a cluster model file: {path}")
    centroids = np.array(payload["centroids"], dtype=np.float64)
    if centroids.size == 0:
        centroids = np.zeros((0, int(payload.get("dim", 0))))
    return ClusterModel(
        labels={cid: int(t) for cid, t in payload["labels"].items()},
        centroids=centroids,
        mode=payload["mode"],
        min_topic_size=int(payload["min_topic_size"]),
        linkage_threshold=float(payload["linkage_threshold"]),
        space=None,
    )

"""Topic coherence over top-word lists.

Two metrics:

* document co-occurrence coherence (UMass style): per topic, the mean over
  ordered word pairs (i > j) of ``log((D(w_i, w_j) + eps) / D(w_j))`` with
  D counted over chunks;
* sliding-window NPMI coherence (C_V style): boolean windows of fixed
  width (stride 1) define word probabilities, each top word gets an NPMI
  vector against all top words, and the topic score is the mean cosine of
  each vector against the vector sum (one-set segmentation).

Aggregates are arithmetic means over topics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fundlens.corpus.vocabulary import TokenizedCorpus

DEFAULT_TOP_N = 10
DEFAULT_CV_WINDOW = 110
DEFAULT_UMASS_EPSILON = 1.0
DEFAULT_CV_EPSILON = 1e-12


@dataclass
class CoherenceResult:
    metric: str  # "c_umass" or "c_v"
    per_topic: list[float]
    aggregate: float
    params: dict

    def __post_init__(self) -> None:
        expected = float(np.mean(self.per_topic)) if self.per_topic else float("nan")
        if self.per_topic and abs(self.aggregate - expected) > 1e-12:
            raise ValueError("aggregate must equal the mean of per-topic scores")


def npmi(p_i: float, p_j: float, p_ij: float, epsilon: float = DEFAULT_CV_EPSILON) -> float:
    """Normalized pointwise mutual information from window probabilities.

    ``log((P_ij + eps) / (P_i * P_j)) / -log(P_ij + eps)``; equals 1 for a
    word with itself whenever 0 < P(w) < 1.
    """
    return math.log((p_ij + epsilon) / (p_i * p_j)) / -math.log(p_ij + epsilon)


def _clip_topic_words(words: Sequence[str], top_n: int) -> list[str]:
    clipped = list(words[:top_n])
    if len(set(clipped)) < 2:
        raise ValueError(f"need at least 2 distinct topic words, got {clipped}")
    return clipped


def coherence_umass(
    topics: Sequence[Sequence[str]],
    corpus: TokenizedCorpus,
    top_n: int = DEFAULT_TOP_N,
    epsilon: float = DEFAULT_UMASS_EPSILON,
) -> CoherenceResult:
    """Document co-occurrence coherence of each topic's top words."""
    vocab = corpus.vocabulary
    chunk_sets = [set(doc) for doc in corpus.encoded]

    def doc_freq(term_id: int) -> int:
        return sum(1 for s in chunk_sets if term_id in s)

    def co_freq(a: int, b: int) -> int:
        return sum(1 for s in chunk_sets if a in s and b in s)

    per_topic: list[float] = []
    for words in topics:
        clipped = _clip_topic_words(words, top_n)
        ids = []
        for w in clipped:
            if w not in vocab:
                raise ValueError(f"term absent from corpus: {w}")
            ids.append(vocab.id_of(w))
        freqs = {i: doc_freq(i) for i in set(ids)}
        for w, i in zip(clipped, ids):
            if freqs[i] == 0:
                raise ValueError(f"term absent from corpus: {w}")
        pair_scores = []
        for i in range(1, len(ids)):
            for j in range(i):
                d_ij = co_freq(ids[i], ids[j])
                pair_scores.append(math.log((d_ij + epsilon) / freqs[ids[j]]))
        per_topic.append(float(np.mean(pair_scores)))

    return CoherenceResult(
        metric="c_umass",
        per_topic=per_topic,
        aggregate=float(np.mean(per_topic)),
        params={"top_n": top_n, "epsilon": epsilon},
    )


def _window_sets(stream: Sequence[str], window: int) -> list[frozenset[str]]:
    n = len(stream)
    if n == 0:
        return []
    if n <= window:
        return [frozenset(stream)]
    return [frozenset(stream[i : i + window]) for i in range(n - window + 1)]


def coherence_cv(
    topics: Sequence[Sequence[str]],
    token_streams: Sequence[Sequence[str]],
    top_n: int = DEFAULT_TOP_N,
    window: int = DEFAULT_CV_WINDOW,
    epsilon: float = DEFAULT_CV_EPSILON,
) -> CoherenceResult:
    """Sliding-window NPMI coherence with indirect cosine confirmation."""
    if window < 1:
        raise ValueError("window must be >= 1")
    windows: list[frozenset[str]] = []
    for stream in token_streams:
        windows.extend(_window_sets(stream, window))
    if not windows:
        raise ValueError("no windows: token streams are empty")
    total = len(windows)

    per_topic: list[float] = []
    for words in topics:
        clipped = _clip_topic_words(words, top_n)
        uniq = sorted(set(clipped))
        contains = {w: np.array([w in ws for ws in windows]) for w in uniq}
        p = {w: contains[w].sum() / total for w in uniq}
        for w in clipped:
            if p[w] == 0.0:
                raise ValueError(f"term absent from corpus: {w}")

        m = len(clipped)
        npmi_matrix = np.zeros((m, m))
        for i, wi in enumerate(clipped):
            for j, wj in enumerate(clipped):
                p_ij = float((contains[wi] & contains[wj]).sum()) / total
                npmi_matrix[i, j] = npmi(p[wi], p[wj], p_ij, epsilon)

        reference = npmi_matrix.sum(axis=0)
        ref_norm = float(np.linalg.norm(reference))
        cosines = []
        for i in range(m):
            vi = npmi_matrix[i]
            ni = float(np.linalg.norm(vi))
            if ni == 0.0 or ref_norm == 0.0:
                cosines.append(0.0)
            else:
                cosines.append(float(vi @ reference) / (ni * ref_norm))
        per_topic.append(float(np.mean(cosines)))

    return CoherenceResult(
        metric="c_v",
        per_topic=per_topic,
        aggregate=float(np.mean(per_topic)),
        params={"top_n": top_n, "window": window, "epsilon": epsilon},
    )

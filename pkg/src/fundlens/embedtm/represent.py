"""Topic keyword extraction: centroid proximity and class-based TF-IDF + MMR.

Centroid proximity ranks vocabulary terms by cosine similarity to each
topic centroid (word vectors must live in the clustering space, i.e. pass
through the same fitted reduction as the chunks).

The class-based TF-IDF score for term w in topic class c is

    tf_{w,c} * log(1 + A / tf_w)

with tf_{w,c} the term count in the concatenated class, tf_w the count
over all classes and A the mean token count per class. Maximal marginal
relevance then picks n diverse terms from the top-2n candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fundlens.corpus.vocabulary import TokenizedCorpus
from fundlens.embedtm.cluster import NOISE, ClusterModel
from fundlens.embedtm.embeddings import EmbeddingSet, cosine_similarity, cosine_to_many

DEFAULT_MMR_LAMBDA = 0.5


@dataclass
class TopicRepresentation:
    topic: int
    terms: list[tuple[str, float]]  # (term, score), scores non-increasing
    method: str  # "centroid_proximity" or "ctfidf_mmr"


def centroid_topic_words(
    model: ClusterModel, word_embeddings: EmbeddingSet, n: int
) -> list[TopicRepresentation]:
    """Per topic, the n terms most cosine-similar to the centroid."""
    if len(word_embeddings) == 0:
        raise ValueError("empty word embedding set")
    if model.n_topics and word_embeddings.dim != model.centroids.shape[1]:
        raise ValueError(
            f"word embedding dim {word_embeddings.dim} does not match "
            f"clustering space dim {model.centroids.shape[1]}"
        )
    reps = []
    terms = word_embeddings.ids
    for topic in range(model.n_topics):
        sims = cosine_to_many(model.centroids[topic], word_embeddings.matrix)
        order = sorted(range(len(terms)), key=lambda i: (-sims[i], terms[i]))[:n]
        reps.append(
            TopicRepresentation(
                topic=topic,
                terms=[(terms[i], float(sims[i])) for i in order],
                method="centroid_proximity",
            )
        )
    return reps


def ctfidf_scores(model: ClusterModel, corpus: TokenizedCorpus) -> np.ndarray:
    """(n_topics, vocab) class-based TF-IDF matrix."""
    index = {cid: i for i, cid in enumerate(corpus.chunk_ids)}
    v = corpus.vocabulary.size
    counts = np.zeros((model.n_topics, v), dtype=np.float64)
    for cid, topic in model.labels.items():
        if topic == NOISE:
            continue
        if cid not in index:
            raise ValueError(f"clustered chunk {cid} missing from corpus")
        for w in corpus.encoded[index[cid]]:
            counts[topic, w] += 1

    class_totals = counts.sum(axis=1)
    for topic, total in enumerate(class_totals):
        if total == 0:
            raise ValueError(f"topic {topic} has zero tokens")
    mean_class_tokens = class_totals.mean()
    tf_w = counts.sum(axis=0)
    idf = np.zeros(v)
    present = tf_w > 0
    idf[present] = np.log(1.0 + mean_class_tokens / tf_w[present])
    return counts * idf


def mmr_select(
    candidates: list[str],
    relevance: dict[str, float],
    n: int,
    lam: float,
    word_embeddings: EmbeddingSet | None,
) -> list[str]:
    """Greedy maximal marginal relevance over a candidate term pool.

    Relevance is normalized to the best candidate; similarity between terms
    is cosine in word-embedding space (0 when a term has no vector). Ties
    prefer higher relevance, then lexicographic order.
    """
    if not 0 <= lam <= 1:
        raise ValueError("lambda must be in [0, 1]")
    max_rel = max((relevance[t] for t in candidates), default=0.0)
    if max_rel <= 0:
        return []
    rel = {t: relevance[t] / max_rel for t in candidates}

    def vec(term: str) -> np.ndarray | None:
        if word_embeddings is not None and term in word_embeddings:
            return word_embeddings.vector(term)
        return None

    selected: list[str] = []
    remaining = sorted(candidates, key=lambda t: (-rel[t], t))
    while remaining and len(selected) < n:
        best_term, best_key = None, None
        for term in remaining:
            tv = vec(term)
            max_sim = 0.0
            if tv is not None and selected:
                sims = [
                    cosine_similarity(tv, sv)
                    for sv in (vec(s) for s in selected)
                    if sv is not None
                ]
                if sims:
                    max_sim = max(sims)
            objective = lam * rel[term] - (1.0 - lam) * max_sim
            key = (objective, rel[term])  # tie -> higher relevance, then lex
            if best_key is None or key > best_key or (key == best_key and term < best_term):
                best_term, best_key = term, key
        selected.append(best_term)
        remaining.remove(best_term)
    return selected


def ctfidf_mmr_words(
    model: ClusterModel,
    corpus: TokenizedCorpus,
    n: int,
    lam: float = DEFAULT_MMR_LAMBDA,
    word_embeddings: EmbeddingSet | None = None,
) -> list[TopicRepresentation]:
    """c-TF-IDF candidates (top 2n) filtered to n diverse terms by MMR.

    Selected terms are reported with their raw c-TF-IDF scores in
    descending score order.
    """
    scores = ctfidf_scores(model, corpus)
    terms = corpus.vocabulary.terms
    reps = []
    for topic in range(model.n_topics):
        row = scores[topic]
        candidate_ids = [w for w in range(len(terms)) if row[w] > 0]
        candidate_ids.sort(key=lambda w: (-row[w], terms[w]))
        candidates = [terms[w] for w in candidate_ids[: 2 * n]]
        relevance = {terms[w]: float(row[w]) for w in candidate_ids[: 2 * n]}
        chosen = mmr_select(candidates, relevance, n, lam, word_embeddings)
        chosen.sort(key=lambda t: (-relevance[t], t))
        reps.append(
            TopicRepresentation(
                topic=topic,
                terms=[(t, relevance[t]) for t in chosen],
                method="ctfidf_mmr",
            )
        )
    return reps

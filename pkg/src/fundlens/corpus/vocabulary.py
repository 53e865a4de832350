"""Term vocabulary construction and corpus encoding.

Terms get dense ids ``0..V-1`` assigned in lexicographic order, so the
mapping is independent of chunk order and safe to build from parallel
counts. N-gram mode (order 3) additionally emits contiguous 2- and 3-grams
joined with a single space; input tokens are whitespace-split upstream so
the space is a reserved separator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NGRAM_SEPARATOR = " "
DEFAULT_MIN_DOC_FREQ = 5


@dataclass
class Vocabulary:
    terms: tuple[str, ...]  # lexicographically sorted
    doc_freq: np.ndarray  # chunks containing each term
    total_tokens: int  # retained token occurrences across the corpus
    index: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {t: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def size(self) -> int:
        return len(self.terms)

    def id_of(self, term: str) -> int:
        return self.index[term]

    def term_of(self, term_id: int) -> str:
        return self.terms[term_id]

    def __contains__(self, term: str) -> bool:
        return term in self.index


@dataclass
class TokenizedCorpus:
    vocabulary: Vocabulary
    encoded: list[list[int]]  # per-chunk term-id sequences
    chunk_ids: list[str]
    ngram_order: int = 1

    def __len__(self) -> int:
        return len(self.encoded)

    def decode(self, chunk_index: int) -> list[str]:
        terms = self.vocabulary.terms
        return [terms[i] for i in self.encoded[chunk_index]]


def expand_ngrams(tokens: Sequence[str], order: int) -> list[str]:
    """Position-major n-gram stream: at each position emit the 1..order grams."""
    if order == 1:
        return list(tokens)
    out: list[str] = []
    n = len(tokens)
    for i in range(n):
        for size in range(1, order + 1):
            if i + size <= n:
                out.append(NGRAM_SEPARATOR.join(tokens[i : i + size]))
    return out


def build_vocabulary(
    token_lists: Sequence[Sequence[str]],
    min_doc_freq: int = DEFAULT_MIN_DOC_FREQ,
    ngram_order: int = 1,
    chunk_ids: Sequence[str] | None = None,
) -> TokenizedCorpus:
    """Count term document frequencies, assign dense ids, re-encode chunks.

    Terms below ``min_doc_freq`` are dropped and their occurrences removed
    from the encoded sequences.
    """
    if ngram_order not in (1, 3):
        raise ValueError("ngram_order must be 1 (unigrams) or 3 (1-3 grams)")
    if min_doc_freq < 1:
        raise ValueError("min_doc_freq must be >= 1")
    if chunk_ids is not None and len(chunk_ids) != len(token_lists):
        raise ValueError("chunk_ids length must match token_lists")
    if all(len(toks) == 0 for toks in token_lists):
        raise ValueError("empty corpus")

    streams: list[list[str]] = []
    for toks in token_lists:
        for tok in toks:
            if not tok:
                raise ValueError("empty token in input")
            if ngram_order > 1 and NGRAM_SEPARATOR in tok:
                raise ValueError(f"token {tok!r} contains the reserved n-gram separator")
        streams.append(expand_ngrams(toks, ngram_order))

    df: dict[str, int] = {}
    for stream in streams:
        for term in set(stream):
            df[term] = df.get(term, 0) + 1

    kept = sorted(term for term, count in df.items() if count >= min_doc_freq)
    if not kept:
        raise ValueError(f"empty vocabulary: no term reaches min_doc_freq={min_doc_freq}")
    index = {t: i for i, t in enumerate(kept)}

    encoded: list[list[int]] = []
    total = 0
    for stream in streams:
        ids = [index[t] for t in stream if t in index]
        total += len(ids)
        encoded.append(ids)

    vocab = Vocabulary(
        terms=tuple(kept),
        doc_freq=np.array([df[t] for t in kept], dtype=np.int64),
        total_tokens=total,
        index=index,
    )
    ids_list = list(chunk_ids) if chunk_ids is not None else [str(i) for i in range(len(token_lists))]
    return TokenizedCorpus(vocabulary=vocab, encoded=encoded, chunk_ids=ids_list, ngram_order=ngram_order)

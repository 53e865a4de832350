"""Document ingestion, chunking, normalization and vocabulary building."""

from fundlens.corpus.chunking import (
    CHUNK_OVERLAP,
    MAX_CHUNK_WORDS,
    MIN_CHUNK_WORDS,
    Chunk,
    chunk_documents,
    chunk_paragraph,
    filter_language,
    read_chunks_jsonl,
    write_chunks_jsonl,
)
from fundlens.corpus.documents import DOC_TYPES, RawDocument, ingest_documents
from fundlens.corpus.normalize import load_stopwords, normalize_for_lda, stem
from fundlens.corpus.vocabulary import (
    NGRAM_SEPARATOR,
    TokenizedCorpus,
    Vocabulary,
    build_vocabulary,
    expand_ngrams,
)

__all__ = [
    "CHUNK_OVERLAP",
    "MAX_CHUNK_WORDS",
    "MIN_CHUNK_WORDS",
    "NGRAM_SEPARATOR",
    "DOC_TYPES",
    "Chunk",
    "RawDocument",
    "TokenizedCorpus",
    "Vocabulary",
    "build_vocabulary",
    "chunk_documents",
    "chunk_paragraph",
    "expand_ngrams",
    "filter_language",
    "ingest_documents",
    "load_stopwords",
    "normalize_for_lda",
    "read_chunks_jsonl",
    "stem",
    "write_chunks_jsonl",
]

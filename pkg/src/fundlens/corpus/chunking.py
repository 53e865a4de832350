"""Paragraph filtering and sliding-window chunking.

Paragraphs are whitespace-tokenized; windows are at most ``max_len`` words
with consecutive windows overlapping by exactly ``overlap`` words, and
paragraphs shorter than ``min_len`` words are dropped outright.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from fundlens.corpus.documents import RawDocument

MAX_CHUNK_WORDS = 400
CHUNK_OVERLAP = 50
MIN_CHUNK_WORDS = 50
DEFAULT_LANGUAGE_THRESHOLD = 0.15


@dataclass
class Chunk:
    chunk_id: str
    doc_id: str
    word_count: int
    words: list[str]
    raw_text: str
    fund_id: str | None = None
    date: str | None = None  # inherited YYYY-MM


def filter_language(block: str, stopwords: frozenset[str], threshold: float = DEFAULT_LANGUAGE_THRESHOLD) -> bool:
    """Keep a paragraph iff its stopword token ratio reaches ``threshold``.

    Tokens are whitespace-split and lowercased before lookup; an empty
    block is always dropped. Total function, never raises.
    """
    tokens = block.split()
    if not tokens:
        return False
    hits = sum(1 for tok in tokens if tok.lower() in stopwords)
    return hits / len(tokens) >= threshold


def chunk_paragraph(
    words: Sequence[str],
    max_len: int = MAX_CHUNK_WORDS,
    overlap: int = CHUNK_OVERLAP,
    min_len: int = MIN_CHUNK_WORDS,
) -> list[list[str]]:
    """Split one paragraph's words into overlapping windows.

    Windows start at multiples of ``max_len - overlap``; every window has
    ``max_len`` words except the last, which ends at the final word. A
    paragraph of fewer than ``min_len`` words yields no windows.
    """
    if not max_len > overlap >= 0:
        raise ValueError("require max_len > overlap >= 0")
    if min_len > max_len:
        raise ValueError("require min_len <= max_len")
    n = len(words)
    if n < min_len:
        return []
    if n <= max_len:
        return [list(words)]
    stride = max_len - overlap
    windows: list[list[str]] = []
    start = 0
    while True:
        end = start + max_len
        if end >= n:
            windows.append(list(words[start:n]))
            break
        windows.append(list(words[start:end]))
        start += stride
    return windows


def chunk_documents(
    docs: Iterable[RawDocument],
    stopwords: frozenset[str],
    language_threshold: float = DEFAULT_LANGUAGE_THRESHOLD,
    max_len: int = MAX_CHUNK_WORDS,
    overlap: int = CHUNK_OVERLAP,
    min_len: int = MIN_CHUNK_WORDS,
) -> list[Chunk]:
    """Language-filter each block, then window it into chunks.

    Chunk ids are ``{doc_id}#b{block_index}w{window_index}``, unique as long
    as doc ids are.
    """
    chunks: list[Chunk] = []
    for doc in docs:
        for b_idx, block in enumerate(doc.blocks):
            if not filter_language(block, stopwords, language_threshold):
                continue
            words = block.split()
            for w_idx, window in enumerate(chunk_paragraph(words, max_len, overlap, min_len)):
                chunks.append(
                    Chunk(
                        chunk_id=f"{doc.doc_id}#b{b_idx}w{w_idx}",
                        doc_id=doc.doc_id,
                        word_count=len(window),
                        words=window,
                        raw_text=" ".join(window),
                        fund_id=doc.fund_id,
                        date=doc.date,
                    )
                )
    return chunks


def write_chunks_jsonl(chunks: Iterable[Chunk], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for c in chunks:
            fh.write(
                json.dumps(
                    {
                        "chunk_id": c.chunk_id,
                        "doc_id": c.doc_id,
                        "fund_id": c.fund_id,
                        "date": c.date,
                        "word_count": c.word_count,
                        "text": c.raw_text,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_chunks_jsonl(path: str | Path) -> list[Chunk]:
    path = Path(path)
    chunks: list[Chunk] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed chunk JSON at line {lineno}: {exc.msg}") from exc
            chunk_id = obj["chunk_id"]
            if chunk_id in seen:
                raise ValueError(f"duplicate chunk_id {chunk_id} at line {lineno}")
            seen.add(chunk_id)
            words = str(obj["text"]).split()
            chunks.append(
                Chunk(
                    chunk_id=chunk_id,
                    doc_id=obj.get("doc_id", ""),
                    word_count=int(obj.get("word_count", len(words))),
                    words=words,
                    raw_text=str(obj["text"]),
                    fund_id=obj.get("fund_id"),
                    date=obj.get("date"),
                )
            )
    return chunks

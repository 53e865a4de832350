"""Token normalization for probabilistic topic modeling.

Pipeline per token: lowercase, strip non-alphabetic edge characters, drop
stopwords, apply the rule-based suffix stemmer, drop short tokens. The
whole per-token pipeline is iterated to a fixed point so that normalizing
already-normalized text is an exact no-op.

The stemmer is a small deterministic suffix table plus an exception map,
not a linguistic lemmatizer; swap in a richer callable via the
``stemmer`` argument if needed.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Callable

DEFAULT_MIN_WORD_LEN = 3

_VOWELS = "aeiou"

# Irregular forms the suffix rules would miss or mangle.
STEM_EXCEPTIONS = {
    "series": "series",
    "fees": "fee",
    "indices": "index",
    "analyses": "analysis",
    "crises": "crisis",
    "theses": "thesis",
    "men": "man",
    "women": "woman",
    "children": "child",
}


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the stopword file (one lowercase term per line).

    With no path, loads the list shipped with the package so golden
    outputs stay stable.
    """
    if path is None:
        text = resources.files("fundlens.corpus").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def _has_vowel(word: str) -> bool:
    return any(ch in _VOWELS for ch in word)


def _fix_after_strip(stem: str) -> str:
    # Repair endings after removing -ed / -ing.
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in "aeioulsz":
        return stem[:-1]
    return stem


def _stem_once(word: str) -> str:
    if word in STEM_EXCEPTIONS:
        return STEM_EXCEPTIONS[word]
    n = len(word)
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies") and n >= 5:
        return word[:-3] + "y"
    if word.endswith(("ss", "us", "is")):
        pass
    elif word.endswith("s") and n - 1 >= 3 and word[-2] not in _VOWELS:
        return word[:-1]
    if word.endswith("ied") and n >= 5:
        return word[:-3] + "y"
    if word.endswith("ed") and n - 2 >= 3 and _has_vowel(word[:-2]):
        return _fix_after_strip(word[:-2])
    if word.endswith("ing") and n - 3 >= 3 and _has_vowel(word[:-3]):
        return _fix_after_strip(word[:-3])
    if word.endswith("ly") and n - 2 >= 3:
        return word[:-2]
    return word


def stem(word: str) -> str:
    """Apply suffix rules until the word stops changing (idempotent)."""
    prev = None
    current = word
    while current != prev:
        prev = current
        current = _stem_once(current)
    return current


def _strip_edges(token: str) -> str:
    start, end = 0, len(token)
    while start < end and not token[start].isalpha():
        start += 1
    while end > start and not token[end - 1].isalpha():
        end -= 1
    return token[start:end]


def normalize_for_lda(
    text: str,
    stopwords: frozenset[str] | None = None,
    min_word_len: int = DEFAULT_MIN_WORD_LEN,
    stemmer: Callable[[str], str] = stem,
) -> list[str]:
    """Normalize raw text to a token list suitable for bag-of-words models."""
    if min_word_len < 1:
        raise ValueError("min_word_len must be >= 1")
    if stopwords is None:
        stopwords = load_stopwords()
    out: list[str] = []
    for raw in text.split():
        token = raw.lower()
        prev = None
        # Iterate strip/stop/stem to a fixed point: stemming can expose new
        # non-alphabetic edges or stopword forms.
        while token and token != prev:
            prev = token
            token = _strip_edges(token)
            if token in stopwords:
                token = ""
                break
            token = stemmer(token)
        if token and token not in stopwords and len(token) >= min_word_len:
            out.append(token)
    return out

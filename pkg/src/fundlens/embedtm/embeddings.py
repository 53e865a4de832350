"""Embedding sets and their JSONL wire format.

File layout: a header line ``{"dim": int, "kind": "chunk"|"word", "model": str}``
followed by one ``{"id": str, "v": [float, ...]}`` record per line. Records
are validated on load: wrong dimension, duplicate ids and non-finite values
are hard errors naming the offending id.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

KINDS = ("chunk", "word")


@dataclass
class EmbeddingSet:
    dim: int
    kind: str  # "chunk" or "word"
    ids: list[str]
    matrix: np.ndarray  # (n, dim) float64
    model_id: str = ""
    _index: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if not self._index:
            self._index = {cid: i for i, cid in enumerate(self.ids)}

    def __len__(self) -> int:
        return len(self.ids)

    def __contains__(self, item_id: str) -> bool:
        return item_id in self._index

    def vector(self, item_id: str) -> np.ndarray:
        return self.matrix[self._index[item_id]]


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity with an explicit zero-vector policy.

    Two zero vectors count as identical (1.0); a single zero vector has no
    direction and gets similarity 0.0.
    """
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 and nb == 0.0:
        return 1.0
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def cosine_to_many(v: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Cosine similarity of ``v`` against every row of ``matrix``."""
    norms = np.linalg.norm(matrix, axis=1)
    nv = float(np.linalg.norm(v))
    sims = np.zeros(matrix.shape[0])
    if nv == 0.0:
        sims[norms == 0.0] = 1.0
        return sims
    nonzero = norms > 0.0
    sims[nonzero] = (matrix[nonzero] @ v) / (norms[nonzero] * nv)
    return sims


def load_embeddings(path: str | Path, expected_kind: str | None = None) -> EmbeddingSet:
    """Read and validate an embedding JSONL file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"embedding file not found: {path}")
    header: dict | None = None
    ids: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed embedding JSON at line {lineno}: {exc.msg}") from exc
            if header is None:
                if "dim" not in obj or "kind" not in obj:
                    raise ValueError("first line must be a header with 'dim' and 'kind'")
                if obj["kind"] not in KINDS:
                    raise ValueError(f"unknown embedding kind {obj['kind']!r}")
                if int(obj["dim"]) < 1:
                    raise ValueError("dim must be >= 1")
                header = obj
                continue
            item_id = obj.get("id")
            if not isinstance(item_id, str) or not item_id:
                raise ValueError(f"missing id at line {lineno}")
            if item_id in seen:
                raise ValueError(f"duplicate id {item_id}")
            vec = obj.get("v")
            if not isinstance(vec, list) or len(vec) != int(header["dim"]):
                raise ValueError(
                    f"dimension mismatch for id {item_id}: "
                    f"expected {header['dim']}, got {len(vec) if isinstance(vec, list) else 'none'}"
                )
            values = [float(x) for x in vec]
            if not all(math.isfinite(x) for x in values):
                raise ValueError(f"non-finite value for id {item_id}")
            seen.add(item_id)
            ids.append(item_id)
            rows.append(values)
    if header is None:
        raise ValueError(f"empty embedding file: {path}")
    if expected_kind is not None and header["kind"] != expected_kind:
        raise ValueError(f"expected kind {expected_kind!r}, file has {header['kind']!r}")
    dim = int(header["dim"])
    matrix = np.array(rows, dtype=np.float64) if rows else np.zeros((0, dim))
    return EmbeddingSet(dim=dim, kind=header["kind"], ids=ids, matrix=matrix, model_id=str(header.get("model", "")))


def write_embeddings(emb: EmbeddingSet, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"dim": emb.dim, "kind": emb.kind, "model": emb.model_id}) + "\n")
        for item_id, row in zip(emb.ids, emb.matrix):
            fh.write(json.dumps({"id": item_id, "v": [float(x) for x in row]}) + "\n")
